#include "folia/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace folia {

namespace {

// Integer polynomial helpers (dense, index = exponent).
using ZPoly = std::vector<mpz_class>;

int zdeg(const ZPoly& p) {
    for (int i = (int)p.size() - 1; i >= 0; --i)
        if (p[i] != 0) return i;
    return -1;
}

// Exact division q = a / b for monic-leading b; remainder must vanish.
ZPoly zdiv_exact(ZPoly a, const ZPoly& b) {
    int db = zdeg(b), da = zdeg(a);
    ZPoly q(std::max(0, da - db + 1), mpz_class(0));
    for (int i = da; i >= db; --i) {
        if (a[i] == 0) continue;
        mpz_class f = a[i] / b[db];
        q[i - db] = f;
        for (int j = 0; j <= db; ++j) a[i - db + j] -= f * b[j];
    }
    if (zdeg(a) >= 0) throw std::logic_error("cyclotomic: non-exact division");
    return q;
}

ZPoly cyclotomic_poly(unsigned n, std::map<unsigned, ZPoly>& memo) {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    ZPoly num(n + 1, mpz_class(0));
    num[0] = -1;
    num[n] = 1;
    for (unsigned d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        num = zdiv_exact(std::move(num), cyclotomic_poly(d, memo));
    }
    memo[n] = num;
    return num;
}

std::vector<unsigned> divisors(unsigned n) {
    std::vector<unsigned> ds;
    for (unsigned d = 1; d <= n; ++d)
        if (n % d == 0) ds.push_back(d);
    return ds;
}

}  // namespace

CycloField::CycloField(unsigned m) : m_(m) {
    if (m == 0) throw std::invalid_argument("cyclotomic conductor must be >= 1");
    std::map<unsigned, ZPoly> memo;
    minpoly_ = cyclotomic_poly(m, memo);
    minpoly_.resize(zdeg(minpoly_) + 1);
    degree_ = minpoly_.size() - 1;

    powers_.resize(m_);
    std::vector<mpz_class> cur(degree_, mpz_class(0));
    if (degree_ > 0) cur[0] = 1;
    for (unsigned t = 0; t < m_; ++t) {
        powers_[t] = cur;
        // multiply by x, reduce by the monic minimal polynomial
        std::vector<mpz_class> nxt(degree_, mpz_class(0));
        for (unsigned i = 0; i + 1 < degree_; ++i) nxt[i + 1] = cur[i];
        if (degree_ > 0 && cur[degree_ - 1] != 0) {
            const mpz_class& top = cur[degree_ - 1];
            for (unsigned j = 0; j < degree_; ++j) nxt[j] -= top * minpoly_[j];
        }
        cur = std::move(nxt);
    }
}

std::shared_ptr<const CycloField> CycloField::get(unsigned conductor) {
    static std::mutex mu;
    static std::map<unsigned, std::shared_ptr<const CycloField>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[conductor];
    if (!slot) slot = std::shared_ptr<const CycloField>(new CycloField(conductor));
    return slot;
}

Cyclo::Cyclo(std::shared_ptr<const CycloField> f, std::vector<mpq_class> coords)
    : field_(std::move(f)), c_(std::move(coords)) {
    if (!field_) throw std::invalid_argument("Cyclo: null field");
    c_.resize(field_->degree(), mpq_class(0));
    if (field_->conductor() == 1) field_.reset();  // Q(zeta_1) = Q
    if (!field_) c_.resize(1);
}

Cyclo Cyclo::root_of_unity(std::shared_ptr<const CycloField> f, unsigned n, long j) {
    if (n == 0) throw std::invalid_argument("root_of_unity: order 0");
    if (!f || f->conductor() % n != 0)
        throw std::invalid_argument(
            "root_of_unity of order " + std::to_string(n) +
            " is not representable at conductor " +
            std::to_string(f ? f->conductor() : 1) + "; raise the conductor or use bigfloat");
    unsigned m = f->conductor();
    long t = (j % (long)n + (long)n) % (long)n;
    const auto& pw = f->power((unsigned)(t * (m / n)));
    std::vector<mpq_class> c(pw.begin(), pw.end());
    return Cyclo(std::move(f), std::move(c));
}

bool Cyclo::is_zero() const {
    for (const auto& q : c_)
        if (q != 0) return false;
    return true;
}

bool Cyclo::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

mpq_class Cyclo::rational() const {
    if (!is_rational()) throw std::domain_error("Cyclo: not a rational value");
    return c_[0];
}

Cyclo Cyclo::promoted(const std::shared_ptr<const CycloField>& f) const {
    if (!f) return *this;
    if (field_ && field_->conductor() == f->conductor()) return *this;
    unsigned a = conductor();
    unsigned m = f->conductor();
    if (m % a != 0)
        throw std::invalid_argument("cyclotomic backend mismatch: conductor " +
                                    std::to_string(a) + " does not divide " + std::to_string(m));
    std::vector<mpq_class> out(f->degree(), mpq_class(0));
    unsigned step = m / a;
    for (size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        const auto& pw = f->power((unsigned)j * step);
        for (size_t t = 0; t < out.size(); ++t)
            if (pw[t] != 0) out[t] += c_[j] * pw[t];
    }
    return Cyclo(f, std::move(out));
}

void Cyclo::align(Cyclo& a, Cyclo& b) {
    if (a.field_ == b.field_) return;
    unsigned ca = a.conductor(), cb = b.conductor();
    if (ca == cb) return;
    unsigned m = lcm_u(ca, cb);
    auto f = (m == ca) ? a.field_ : (m == cb) ? b.field_ : CycloField::get(m);
    a = a.promoted(f);
    b = b.promoted(f);
}

Cyclo Cyclo::operator-() const {
    Cyclo r = *this;
    for (auto& q : r.c_) q = -q;
    return r;
}

Cyclo operator+(const Cyclo& a0, const Cyclo& b0) {
    Cyclo a = a0, b = b0;
    Cyclo::align(a, b);
    for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
    return a;
}

Cyclo operator-(const Cyclo& a0, const Cyclo& b0) {
    Cyclo a = a0, b = b0;
    Cyclo::align(a, b);
    for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] -= b.c_[i];
    return a;
}

void Cyclo::reduce(std::vector<mpq_class>& raw) const {
    // raw has length up to 2*deg-1; fold down using the monic minimal polynomial
    unsigned deg = field_->degree();
    const auto& mp = field_->minpoly();
    for (size_t i = raw.size(); i-- > deg;) {
        if (raw[i] == 0) continue;
        mpq_class f = raw[i];
        raw[i] = 0;
        for (unsigned j = 0; j < deg; ++j)
            if (mp[j] != 0) raw[i - deg + j] -= f * mp[j];
    }
    raw.resize(deg);
}

Cyclo operator*(const Cyclo& a0, const Cyclo& b0) {
    // rational fast paths
    if (!a0.field_ || !b0.field_) {
        const Cyclo& scalar = !a0.field_ ? a0 : b0;
        const Cyclo& other = !a0.field_ ? b0 : a0;
        Cyclo r = other;
        const mpq_class& s = scalar.c_[0];
        for (auto& q : r.c_) q *= s;
        return r;
    }
    Cyclo a = a0, b = b0;
    Cyclo::align(a, b);
    size_t n = a.c_.size();
    std::vector<mpq_class> raw(2 * n - 1, mpq_class(0));
    for (size_t i = 0; i < n; ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < n; ++j)
            if (b.c_[j] != 0) raw[i + j] += a.c_[i] * b.c_[j];
    }
    a.reduce(raw);
    a.c_ = std::move(raw);
    return a;
}

bool operator==(const Cyclo& a0, const Cyclo& b0) {
    Cyclo a = a0, b = b0;
    Cyclo::align(a, b);
    return a.c_ == b.c_;
}

namespace {

// Q[x] helpers for the extended Euclid inverse.
using QPoly = std::vector<mpq_class>;

int qdeg(const QPoly& p) {
    for (int i = (int)p.size() - 1; i >= 0; --i)
        if (p[i] != 0) return i;
    return -1;
}

QPoly qscale(QPoly p, const mpq_class& s) {
    for (auto& c : p) c *= s;
    return p;
}

QPoly qsub(QPoly a, const QPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), mpq_class(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return a;
}

QPoly qmul(const QPoly& a, const QPoly& b) {
    int da = qdeg(a), db = qdeg(b);
    if (da < 0 || db < 0) return QPoly{mpq_class(0)};
    QPoly r(da + db + 1, mpq_class(0));
    for (int i = 0; i <= da; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j <= db; ++j)
            if (b[j] != 0) r[i + j] += a[i] * b[j];
    }
    return r;
}

// a = q*b + r
std::pair<QPoly, QPoly> qdivmod(QPoly a, const QPoly& b) {
    int db = qdeg(b);
    if (db < 0) throw std::domain_error("poly division by zero");
    QPoly q(std::max<int>(1, qdeg(a) - db + 1), mpq_class(0));
    for (int i = qdeg(a); i >= db; i = qdeg(a)) {
        mpq_class f = a[i] / b[db];
        q[i - db] += f;
        for (int j = 0; j <= db; ++j) a[i - db + j] -= f * b[j];
    }
    return {q, a};
}

}  // namespace

Cyclo Cyclo::inverse() const {
    if (is_zero()) throw std::domain_error("Cyclo: division by zero");
    if (!field_) {
        mpq_class inv(c_[0].get_den(), c_[0].get_num());
        inv.canonicalize();
        return Cyclo(inv);
    }
    if (is_rational()) {
        mpq_class inv(c_[0].get_den(), c_[0].get_num());
        inv.canonicalize();
        Cyclo r(0);
        r.field_ = field_;
        r.c_.assign(field_->degree(), mpq_class(0));
        r.c_[0] = inv;
        return r;
    }
    // Extended Euclid: u*this + v*Phi = 1 in Q[x].
    QPoly r0(field_->minpoly().begin(), field_->minpoly().end());
    QPoly r1 = c_;
    QPoly s0{mpq_class(0)}, s1{mpq_class(1)};  // coefficients of `this`
    while (true) {
        int d1 = qdeg(r1);
        if (d1 < 0) throw std::logic_error("cyclotomic inverse: zero remainder");
        if (d1 == 0) {
            // deg(s1) < deg(Phi), so the coordinates fit the power basis
            QPoly u = qscale(s1, mpq_class(1) / r1[0]);
            u.resize(field_->degree(), mpq_class(0));
            return Cyclo(field_, std::move(u));
        }
        auto [q, r2] = qdivmod(r0, r1);
        QPoly s2 = qsub(s0, qmul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
}

Cyclo Cyclo::conj() const {
    if (!field_) return *this;
    unsigned m = field_->conductor();
    std::vector<mpq_class> out(field_->degree(), mpq_class(0));
    for (size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        const auto& pw = field_->power((unsigned)((j * (m - 1)) % m));
        for (size_t t = 0; t < out.size(); ++t)
            if (pw[t] != 0) out[t] += c_[j] * pw[t];
    }
    return Cyclo(field_, std::move(out));
}

Cyclo Cyclo::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Cyclo base = *this;
    Cyclo acc(1);
    unsigned long k = (unsigned long)e;
    while (k) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

unsigned Cyclo::multiplicative_order() const {
    if (is_zero()) return 0;
    unsigned m = conductor();
    unsigned bound = lcm_u(2, m);
    Cyclo one(1);
    for (unsigned d : divisors(bound))
        if (pow(d) == one) return d;
    return 0;
}

std::optional<Cyclo> Cyclo::kth_root(unsigned k) const {
    if (k == 0) return std::nullopt;
    if (k == 1) return *this;
    if (is_zero()) return Cyclo(0);
    unsigned m = conductor();
    auto f = field_ ? field_ : CycloField::get(1);
    for (unsigned j = 0; j < m; ++j) {
        Cyclo u = (m == 1) ? Cyclo(1) : root_of_unity(f, m, (long)j);
        Cyclo q = *this * u.inverse();
        if (!q.is_rational()) continue;
        mpq_class r = q.rational();
        bool neg = r < 0;
        auto rt = exact_root(mpq_class(neg ? -r : r), k);
        if (!rt) continue;
        // sign: fold -1 = zeta_m^{m/2} into the unity part when possible
        long extra_half = 0;
        if (neg) {
            if (k % 2 == 1) {
                *rt = -*rt;
            } else if (m % 2 == 0) {
                extra_half = (long)(m / 2);
            } else {
                continue;
            }
        }
        // root of zeta_m^{j + extra_half}: find y with k*y = j' (mod m)
        long jp = ((long)j + extra_half) % (long)m;
        for (long y = 0; y < (long)m; ++y) {
            if (((long)k * y) % (long)m == jp) {
                Cyclo cand = Cyclo(*rt) * ((m == 1) ? Cyclo(1) : root_of_unity(f, m, y));
                if (cand.pow((long)k) == *this) return cand;
            }
        }
    }
    return std::nullopt;
}

std::string Cyclo::str() const {
    std::ostringstream os;
    if (!field_) {
        os << c_[0];
        return os.str();
    }
    os << "[";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ",";
        os << c_[i];
    }
    os << "]@z" << field_->conductor();
    return os.str();
}

std::string to_string(const Cyclo& a) { return a.str(); }

}  // namespace folia
