#ifndef CRNORM_SERIES_HPP
#define CRNORM_SERIES_HPP

#include "crnorm/scalar.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace crnorm {

// Variables: slots 0..3 are z1, z2, zb1, zb2. Slots 4 and 5 are extra
// variables tagged per series (s, w, or wb); slot 5 is only used by
// intermediate computations that need w and wb simultaneously.
enum Var : int { VZ1 = 0, VZ2 = 1, VZB1 = 2, VZB2 = 3, VX1 = 4, VX2 = 5 };

enum class VarTag : std::uint8_t { None = 0, S, W, Tau };

inline VarTag conj_tag(VarTag t) {
    switch (t) {
        case VarTag::W: return VarTag::Tau;
        case VarTag::Tau: return VarTag::W;
        default: return t;
    }
}

inline const char* tag_name(VarTag t) {
    switch (t) {
        case VarTag::S: return "s";
        case VarTag::W: return "w";
        case VarTag::Tau: return "wb";
        default: return "?";
    }
}

struct WeightProfile {
    int weight_w = 2;          // 2 or 3
    int truncation_order = 8;  // weighted truncation bound

    friend bool operator==(const WeightProfile& a, const WeightProfile& b) {
        return a.weight_w == b.weight_w && a.truncation_order == b.truncation_order;
    }
    friend bool operator!=(const WeightProfile& a, const WeightProfile& b) { return !(a == b); }
};

struct Monomial {
    std::array<std::uint8_t, 6> e{0, 0, 0, 0, 0, 0};

    int z_degree() const { return e[0] + e[1]; }
    int zb_degree() const { return e[2] + e[3]; }
    int weighted_degree(const WeightProfile& p) const {
        return z_degree() + zb_degree() + p.weight_w * (e[4] + e[5]);
    }
    bool is_constant() const {
        return !e[0] && !e[1] && !e[2] && !e[3] && !e[4] && !e[5];
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return a.e != b.e; }
};

// Graded-lexicographic order: weighted degree, then the exponent tuple.
struct MonoLess {
    WeightProfile profile;
    bool operator()(const Monomial& a, const Monomial& b) const {
        int wa = a.weighted_degree(profile);
        int wb = b.weighted_degree(profile);
        if (wa != wb) return wa < wb;
        return a.e < b.e;
    }
};

constexpr int kNoTruncation = std::numeric_limits<int>::max() / 4;

enum class SeriesKind { RealSide, HoloSide, AntiHoloSide, Mixed };

class Series {
public:
    Series() = default;
    explicit Series(WeightProfile p, std::array<VarTag, 2> tags = {VarTag::None, VarTag::None})
        : profile_(p), tags_(tags) {}

    static Series zero(WeightProfile p) { return Series(p); }

    static Series constant(WeightProfile p, Scalar c) {
        Series s(p);
        if (!c.is_exact_zero()) s.terms_.push_back({Monomial{}, std::move(c)});
        return s;
    }

    static Series variable(WeightProfile p, int var, VarTag tag = VarTag::None) {
        Series s(p);
        Monomial m;
        m.e[var] = 1;
        s.terms_.push_back({m, Scalar(1)});
        if (var >= VX1) {
            if (tag == VarTag::None) throw std::logic_error("series: extra slot needs a tag");
            s.tags_[var - VX1] = tag;
        }
        return s;
    }

    static Series monomial(WeightProfile p, const Monomial& m, Scalar c,
                           std::array<VarTag, 2> tags = {VarTag::None, VarTag::None}) {
        Series s(p, tags);
        if (!c.is_exact_zero()) s.terms_.push_back({m, std::move(c)});
        s.normalize_tags();
        s.sort_terms();
        return s;
    }

    const WeightProfile& profile() const { return profile_; }
    const std::vector<std::pair<Monomial, Scalar>>& terms() const { return terms_; }
    std::array<VarTag, 2> tags() const { return tags_; }
    VarTag tag(int slot) const { return tags_[slot]; }
    int valid_order() const { return valid_order_; }
    bool is_zero_series() const { return terms_.empty(); }

    void set_valid_order(int v) { valid_order_ = v; }

    int trunc_cap() const { return std::min(valid_order_, profile_.truncation_order); }

    SeriesKind kind() const {
        bool has_z = false, has_zb = false, has_w = false, has_tau = false, has_s = false;
        for (auto& [m, c] : terms_) {
            if (m.e[0] || m.e[1]) has_z = true;
            if (m.e[2] || m.e[3]) has_zb = true;
            for (int s = 0; s < 2; ++s)
                if (m.e[VX1 + s]) {
                    if (tags_[s] == VarTag::S) has_s = true;
                    if (tags_[s] == VarTag::W) has_w = true;
                    if (tags_[s] == VarTag::Tau) has_tau = true;
                }
        }
        if (has_s && !has_w && !has_tau) return SeriesKind::RealSide;
        if (!has_s && !has_tau && !has_zb) return SeriesKind::HoloSide;
        if (!has_s && !has_w && !has_z) return SeriesKind::AntiHoloSide;
        if (!has_s && !has_w && !has_tau && !has_zb) return SeriesKind::HoloSide;
        return SeriesKind::Mixed;
    }

    bool uses_slot(int slot) const {
        for (auto& [m, c] : terms_)
            if (m.e[VX1 + slot]) return true;
        return false;
    }

    // True when every coefficient is exact.
    bool is_exact() const {
        for (auto& [m, c] : terms_)
            if (!c.is_exact()) return false;
        return true;
    }

    Real max_abs_coeff() const {
        Real m(0);
        for (auto& [mo, c] : terms_) {
            Real a = c.abs_approx();
            if (a > m) m = a;
        }
        return m;
    }

    // Minimum weighted degree of the support; large sentinel for zero.
    int order() const {
        if (terms_.empty()) return kNoTruncation;
        return terms_.front().first.weighted_degree(profile_);
    }

    Scalar coeff(const Monomial& m) const {
        MonoLess less{profile_};
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [&](const auto& t, const Monomial& k) { return less(t.first, k); });
        if (it != terms_.end() && it->first == m) return it->second;
        return Scalar(0);
    }

    void set_coeff(const Monomial& m, const Scalar& c) {
        MonoLess less{profile_};
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [&](const auto& t, const Monomial& k) { return less(t.first, k); });
        if (it != terms_.end() && it->first == m) {
            if (c.is_exact_zero())
                terms_.erase(it);
            else
                it->second = c;
        } else if (!c.is_exact_zero()) {
            terms_.insert(it, {m, c});
        }
        normalize_tags();
    }

    friend Series operator+(const Series& a, const Series& b) {
        Series r = a.binary_shell(b);
        MonoLess less{r.profile_};
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() || ib != b.terms_.end()) {
            if (ib == b.terms_.end() || (ia != a.terms_.end() && less(ia->first, ib->first))) {
                r.terms_.push_back(*ia++);
            } else if (ia == a.terms_.end() || less(ib->first, ia->first)) {
                r.terms_.push_back(*ib++);
            } else {
                Scalar c = ia->second + ib->second;
                if (!c.is_exact_zero()) r.terms_.push_back({ia->first, c});
                ++ia; ++ib;
            }
        }
        r.post_op();
        return r;
    }

    friend Series operator-(const Series& a, const Series& b) { return a + b.scaled(Scalar(-1)); }
    friend Series operator-(const Series& a) { return a.scaled(Scalar(-1)); }

    Series scaled(const Scalar& c) const {
        Series r(*this);
        if (c.is_exact_zero()) {
            r.terms_.clear();
            return r;
        }
        for (auto& [m, v] : r.terms_) v *= c;
        r.post_op();
        return r;
    }

    friend Series operator*(const Series& a, const Series& b) {
        Series r = a.binary_shell(b);
        int cap = std::min(r.trunc_cap(), r.profile_.truncation_order);
        std::map<Monomial, Scalar, MonoLess> acc{MonoLess{r.profile_}};
        for (auto& [ma, ca] : a.terms_) {
            int wa = ma.weighted_degree(r.profile_);
            for (auto& [mb, cb] : b.terms_) {
                if (wa + mb.weighted_degree(r.profile_) > cap) continue;
                Monomial m;
                bool ok = true;
                for (int i = 0; i < 6; ++i) {
                    int s = ma.e[i] + mb.e[i];
                    if (s > 255) { ok = false; break; }
                    m.e[i] = static_cast<std::uint8_t>(s);
                }
                if (!ok) throw std::overflow_error("series: exponent overflow");
                auto it = acc.find(m);
                if (it == acc.end())
                    acc.emplace(m, ca * cb);
                else
                    it->second += cb * ca;
            }
        }
        for (auto& [m, c] : acc)
            if (!c.is_exact_zero()) r.terms_.push_back({m, c});
        r.post_op();
        return r;
    }

    Series& operator+=(const Series& o) { *this = *this + o; return *this; }
    Series& operator-=(const Series& o) { *this = *this - o; return *this; }
    Series& operator*=(const Series& o) { *this = *this * o; return *this; }

    Series pow(int n) const {
        if (n < 0) throw std::domain_error("series: negative power");
        Series r = Series::constant(profile_, Scalar(1));
        r.set_valid_order(valid_order_);
        Series base = *this;
        while (n) {
            if (n & 1) r = r * base;
            base = (n >>= 1) ? base * base : base;
        }
        return r;
    }

    // Coefficient-wise conjugation with z <-> zb and w <-> wb.
    Series conjugate() const {
        Series r(profile_, {conj_tag(tags_[0]), conj_tag(tags_[1])});
        r.valid_order_ = valid_order_;
        for (auto& [m, c] : terms_) {
            Monomial k;
            k.e[0] = m.e[2]; k.e[1] = m.e[3];
            k.e[2] = m.e[0]; k.e[3] = m.e[1];
            k.e[4] = m.e[4]; k.e[5] = m.e[5];
            r.terms_.push_back({k, c.conj()});
        }
        r.canonicalize_slot_order();
        r.sort_terms();
        r.normalize_tags();
        return r;
    }

    Series partial_derivative(int var, int order = 1) const {
        if (order < 1) throw std::domain_error("series: derivative order must be >= 1");
        Series r(profile_, tags_);
        int w = var >= VX1 ? profile_.weight_w : 1;
        r.valid_order_ = valid_order_ >= kNoTruncation ? kNoTruncation
                                                       : valid_order_ - order * w;
        for (auto& [m, c] : terms_) {
            if (m.e[var] < order) continue;
            Scalar f = c;
            for (int j = 0; j < order; ++j) f *= Scalar(static_cast<int>(m.e[var]) - j);
            Monomial k = m;
            k.e[var] = static_cast<std::uint8_t>(m.e[var] - order);
            r.terms_.push_back({k, f});
        }
        r.sort_terms();
        r.normalize_tags();
        r.post_op();
        return r;
    }

    Series type_component(int k, int l) const {
        Series r(profile_, tags_);
        r.valid_order_ = valid_order_;
        for (auto& [m, c] : terms_)
            if (m.z_degree() == k && m.zb_degree() == l) r.terms_.push_back({m, c});
        r.normalize_tags();
        return r;
    }

    Series weighted_component(int nu) const {
        Series r(profile_, tags_);
        r.valid_order_ = valid_order_;
        for (auto& [m, c] : terms_)
            if (m.weighted_degree(profile_) == nu) r.terms_.push_back({m, c});
        r.normalize_tags();
        return r;
    }

    Series truncate_above(int nu) const {
        Series r(profile_, tags_);
        r.valid_order_ = valid_order_;
        for (auto& [m, c] : terms_)
            if (m.weighted_degree(profile_) <= nu) r.terms_.push_back({m, c});
        r.normalize_tags();
        return r;
    }

    Series filter(const std::function<bool(const Monomial&)>& pred) const {
        Series r(profile_, tags_);
        r.valid_order_ = valid_order_;
        for (auto& [m, c] : terms_)
            if (pred(m)) r.terms_.push_back({m, c});
        r.normalize_tags();
        return r;
    }

    // Simultaneous substitution: bindings[var] replaces that variable. Each
    // binding must have weighted order >= the weight of the variable it
    // replaces, so truncation stays valid.
    Series substitute(const std::map<int, Series>& bindings) const {
        if (bindings.empty()) return *this;
        WeightProfile p = profile_;
        std::array<VarTag, 2> out_tags = {VarTag::None, VarTag::None};
        int min_valid = valid_order_;
        for (auto& [var, s] : bindings) {
            if (s.profile() != p) throw std::invalid_argument("series: profile mismatch");
            int w = var >= VX1 ? p.weight_w : 1;
            if (!s.is_zero_series() && s.order() < w)
                throw std::invalid_argument("series: binding order too low");
            min_valid = std::min(min_valid, s.valid_order());
            out_tags = merge_tags(out_tags, s.tags());
        }
        for (int slot = 0; slot < 2; ++slot)
            if (uses_slot(slot) && !bindings.count(VX1 + slot))
                out_tags = merge_tags(out_tags, single_tag(slot, tags_[slot]));

        // Group terms by bound-variable exponents; residual part keeps the
        // unbound variables as a monomial factor.
        std::vector<int> bound;
        for (auto& [var, s] : bindings) bound.push_back(var);

        struct Key {
            std::array<std::uint8_t, 6> e{0, 0, 0, 0, 0, 0};
            bool operator<(const Key& o) const { return e < o.e; }
        };
        std::map<Key, Series> groups;
        for (auto& [m, c] : terms_) {
            Key k;
            Monomial residual = m;
            for (int v : bound) {
                k.e[v] = m.e[v];
                residual.e[v] = 0;
            }
            auto it = groups.find(k);
            if (it == groups.end()) {
                Series g(p, tags_);
                g.valid_order_ = kNoTruncation;
                it = groups.emplace(k, std::move(g)).first;
            }
            it->second.terms_.push_back({residual, c});
        }
        for (auto& [k, g] : groups) {
            g.sort_terms();
            g.normalize_tags();
        }

        // Memoized powers of each binding.
        std::map<int, std::vector<Series>> powers;
        auto power = [&](int var, int n) -> const Series& {
            auto& tab = powers[var];
            if (tab.empty()) {
                Series one = Series::constant(p, Scalar(1));
                one.tags_ = bindings.at(var).tags();
                tab.push_back(one);
            }
            while (static_cast<int>(tab.size()) <= n) tab.push_back(tab.back() * bindings.at(var));
            return tab[n];
        };

        Series result(p, out_tags);
        result.valid_order_ = min_valid;
        for (auto& [k, g] : groups) {
            Series term = g;
            term.tags_ = merge_tags(term.tags_, out_tags);
            for (int v : bound)
                if (k.e[v]) term = term * power(v, k.e[v]);
            result = result + term;
        }
        result.valid_order_ = min_valid;
        result.post_op();
        return result;
    }

    Series substitute(int var, const Series& s) const {
        std::map<int, Series> b;
        b.emplace(var, s);
        return substitute(b);
    }

    // Multiplicative inverse; needs a non-zero constant term.
    Series inverse() const {
        Scalar c0 = coeff(Monomial{});
        if (c0.is_exact() && c0.is_exact_zero())
            throw std::domain_error("series: inverse of series with zero constant term");
        Series u = (*this - Series::constant(profile_, c0)).scaled(Scalar(1) / c0);
        Series acc = Series::constant(profile_, Scalar(1));
        acc.valid_order_ = valid_order_;
        Series pw = acc;
        int cap = std::min(trunc_cap(), profile_.truncation_order);
        int step = std::max(1, u.is_zero_series() ? cap + 1 : u.order());
        for (int k = 1; k * step <= cap; ++k) {
            pw = pw * u.scaled(Scalar(-1));
            acc = acc + pw;
        }
        return acc.scaled(Scalar(1) / c0);
    }

    // n-th root anchored at the supplied root of the constant term.
    Series root(int n, const Scalar& anchor) const {
        if (n != 2 && n != 3) throw std::domain_error("series: root index must be 2 or 3");
        Scalar c0 = coeff(Monomial{});
        if (c0.is_exact() && c0.is_exact_zero())
            throw std::domain_error("series: root of series with zero constant term");
        Scalar check = anchor;
        for (int j = 1; j < n; ++j) check *= anchor;
        if (c0.is_exact() && anchor.is_exact()) {
            if (check != c0) throw std::domain_error("series: anchor is not a root of the constant term");
        } else if (!approx_eq(check, c0)) {
            throw std::domain_error("series: anchor is not a root of the constant term");
        }
        Series u = (*this - Series::constant(profile_, c0)).scaled(Scalar(1) / c0);
        // Binomial series for (1+u)^(1/n).
        Series acc = Series::constant(profile_, Scalar(1));
        acc.valid_order_ = valid_order_;
        Series upow = acc;
        Scalar coef(1);
        int cap = std::min(trunc_cap(), profile_.truncation_order);
        int step = std::max(1, u.is_zero_series() ? cap + 1 : u.order());
        Scalar inv_n = Scalar(1) / Scalar(n);
        for (int k = 1; k * step <= cap; ++k) {
            coef *= (inv_n - Scalar(k - 1)) / Scalar(k);
            upow = upow * u;
            acc = acc + upow.scaled(coef);
        }
        return acc.scaled(anchor);
    }

    bool is_real_series() const {
        Series d = *this - conjugate();
        if (is_exact()) return d.is_zero_series();
        Real scale = max_abs_coeff();
        for (auto& [m, c] : d.terms_)
            if (!c.is_zero(scale)) return false;
        return true;
    }

    Series real_part() const {
        return (*this + conjugate()).scaled(Scalar::rational(1, 2));
    }
    Series imag_part() const {
        return (*this - conjugate()).scaled(Scalar(1) / (Scalar(2) * Scalar::i()));
    }

    friend bool operator==(const Series& a, const Series& b) {
        if (a.profile_ != b.profile_) return false;
        if (a.terms_.size() != b.terms_.size()) return false;
        for (size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].first != b.terms_[i].first || a.terms_[i].second != b.terms_[i].second)
                return false;
        return true;
    }
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto& [m, c] : terms_) {
            if (!first) out += " + ";
            first = false;
            out += c.str();
            static const char* zn[4] = {"z1", "z2", "zb1", "zb2"};
            for (int v = 0; v < 4; ++v)
                if (m.e[v]) {
                    out += "*";
                    out += zn[v];
                    if (m.e[v] > 1) out += "^" + std::to_string(static_cast<int>(m.e[v]));
                }
            for (int s = 0; s < 2; ++s)
                if (m.e[VX1 + s]) {
                    out += "*";
                    out += tag_name(tags_[s]);
                    if (m.e[VX1 + s] > 1) out += "^" + std::to_string(static_cast<int>(m.e[VX1 + s]));
                }
        }
        return out;
    }

    static std::array<VarTag, 2> merge_tags(std::array<VarTag, 2> a, std::array<VarTag, 2> b) {
        std::array<VarTag, 2> r{};
        for (int i = 0; i < 2; ++i) {
            if (a[i] == VarTag::None) r[i] = b[i];
            else if (b[i] == VarTag::None || a[i] == b[i]) r[i] = a[i];
            else throw std::invalid_argument("series: incompatible extra-variable tags");
        }
        return r;
    }

private:
    static std::array<VarTag, 2> single_tag(int slot, VarTag t) {
        std::array<VarTag, 2> r{VarTag::None, VarTag::None};
        r[slot] = t;
        return r;
    }

    Series binary_shell(const Series& o) const {
        if (profile_ != o.profile_) throw std::invalid_argument("series: profile mismatch");
        Series r(profile_, merge_tags(effective_tags(), o.effective_tags()));
        r.valid_order_ = std::min(valid_order_, o.valid_order_);
        return r;
    }

    std::array<VarTag, 2> effective_tags() const {
        std::array<VarTag, 2> t = tags_;
        for (int s = 0; s < 2; ++s)
            if (!uses_slot(s)) t[s] = VarTag::None;
        return t;
    }

    void sort_terms() {
        MonoLess less{profile_};
        std::sort(terms_.begin(), terms_.end(),
                  [&](const auto& a, const auto& b) { return less(a.first, b.first); });
    }

    void normalize_tags() {
        for (int s = 0; s < 2; ++s)
            if (!uses_slot(s)) tags_[s] = VarTag::None;
    }

    // Keep slot tags in canonical order (S < W < Tau) after conjugation.
    void canonicalize_slot_order() {
        if (tags_[0] != VarTag::None && tags_[1] != VarTag::None &&
            static_cast<int>(tags_[0]) > static_cast<int>(tags_[1])) {
            std::swap(tags_[0], tags_[1]);
            for (auto& [m, c] : terms_) std::swap(m.e[4], m.e[5]);
        } else if (tags_[0] == VarTag::None && tags_[1] != VarTag::None) {
            bool slot0_used = uses_slot(0);
            if (!slot0_used) {
                std::swap(tags_[0], tags_[1]);
                for (auto& [m, c] : terms_) std::swap(m.e[4], m.e[5]);
            }
        }
    }

    void post_op() {
        int cap = std::min(valid_order_, profile_.truncation_order);
        bool any_float = false;
        for (auto& [m, c] : terms_)
            if (c.is_float()) { any_float = true; break; }
        std::vector<std::pair<Monomial, Scalar>> kept;
        kept.reserve(terms_.size());
        Real scale(0);
        if (any_float) scale = max_abs_coeff();
        for (auto& [m, c] : terms_) {
            if (m.weighted_degree(profile_) > cap) continue;
            if (c.is_exact()) {
                if (c.is_exact_zero()) continue;
            } else if (c.is_zero(scale)) {
                continue;
            }
            kept.push_back({m, c});
        }
        terms_ = std::move(kept);
        normalize_tags();
    }

    WeightProfile profile_{};
    std::array<VarTag, 2> tags_{VarTag::None, VarTag::None};
    std::vector<std::pair<Monomial, Scalar>> terms_;
    int valid_order_ = kNoTruncation;
};

inline Series conjugate_series(const Series& s) { return s.conjugate(); }
inline Series series_mul(const Series& a, const Series& b) { return a * b; }
inline Series series_inverse(const Series& s) { return s.inverse(); }
inline Series series_root(const Series& s, int n, const Scalar& anchor) { return s.root(n, anchor); }
inline bool is_real_series(const Series& s) { return s.is_real_series(); }
inline Series type_component(const Series& s, int k, int l) { return s.type_component(k, l); }
inline Series weighted_component(const Series& s, int nu) { return s.weighted_component(nu); }

inline Monomial make_mono(int z1, int z2, int zb1, int zb2, int x1 = 0, int x2 = 0) {
    Monomial m;
    m.e = {static_cast<std::uint8_t>(z1), static_cast<std::uint8_t>(z2),
           static_cast<std::uint8_t>(zb1), static_cast<std::uint8_t>(zb2),
           static_cast<std::uint8_t>(x1), static_cast<std::uint8_t>(x2)};
    return m;
}

inline bool approx_equal_series(const Series& a, const Series& b, const Real& tol = Real("1e-25")) {
    Series d = a - b;
    Real scale = 1 + a.max_abs_coeff() + b.max_abs_coeff();
    for (auto& [m, c] : d.terms())
        if (c.abs_approx() > tol * scale) return false;
    return true;
}

} // namespace crnorm

#endif
