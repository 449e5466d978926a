#include "superalg/freealg.hpp"

#include <mutex>
#include <stdexcept>

namespace superalg {

std::string Word::to_string() const {
    std::string s;
    for (int i = 0; i < len; ++i) s += letter(i) ? 'Y' : 'X';
    return s;
}

FreeElement::FreeElement(int degree) : D_(degree) {
    if (degree < 0 || degree > kMaxBchDegree) throw std::invalid_argument("free algebra degree must lie in 0..8");
    c_.assign((std::size_t(1) << (degree + 1)) - 1, Q(0));
}

FreeElement FreeElement::letter(int degree, int which) {
    FreeElement e(degree);
    if (degree >= 1) e[Word{1, unsigned(which)}] = 1;
    return e;
}

FreeElement& FreeElement::operator+=(const FreeElement& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

FreeElement& FreeElement::operator-=(const FreeElement& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

FreeElement operator*(const FreeElement& a, const FreeElement& b) {
    FreeElement r(a.D_);
    auto ta = a.terms();
    auto tb = b.terms();
    for (const auto& [wa, qa] : ta)
        for (const auto& [wb, qb] : tb) {
            if (wa.len + wb.len > a.D_) continue;
            Word w{wa.len + wb.len, wa.bits | (wb.bits << wa.len)};
            r[w] += qa * qb;
        }
    return r;
}

FreeElement operator*(FreeElement a, const Q& s) {
    for (auto& x : a.c_) x *= s;
    return a;
}

FreeElement FreeElement::homogeneous(int k) const {
    FreeElement r(D_);
    if (k < 0 || k > D_) return r;
    for (unsigned b = 0; b < (1u << k); ++b) r[Word{k, b}] = (*this)[Word{k, b}];
    return r;
}

FreeElement FreeElement::up_to(int k) const {
    FreeElement r(D_);
    for (int j = 0; j <= std::min(k, D_); ++j) r += homogeneous(j);
    return r;
}

FreeElement FreeElement::exp() const {
    if ((*this)[Word{}] != 0) throw std::domain_error("exp needs a zero constant term");
    FreeElement sum(D_), term(D_);
    term[Word{}] = 1;
    sum[Word{}] = 1;
    for (int k = 1; k <= D_; ++k) {
        term = term * *this * Q(1, k);
        sum += term;
    }
    return sum;
}

FreeElement FreeElement::log1p() const {
    if ((*this)[Word{}] != 0) throw std::domain_error("log1p needs a zero constant term");
    FreeElement sum(D_), power = *this;
    for (int k = 1; k <= D_; ++k) {
        sum += power * Q(k % 2 ? 1 : -1, k);
        power = power * *this;
    }
    return sum;
}

bool FreeElement::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

std::vector<std::pair<Word, Q>> FreeElement::terms() const {
    std::vector<std::pair<Word, Q>> out;
    for (int len = 0; len <= D_; ++len)
        for (unsigned b = 0; b < (1u << len); ++b) {
            const Q& q = c_[index(Word{len, b})];
            if (q != 0) out.emplace_back(Word{len, b}, q);
        }
    return out;
}

std::string FreeElement::to_string() const {
    std::string out;
    for (const auto& [w, q] : terms()) {
        if (!out.empty()) out += q < 0 ? " - " : " + ";
        else if (q < 0) out += "-";
        out += q_to_string(abs(q));
        if (w.len) out += "*" + w.to_string();
    }
    return out.empty() ? "0" : out;
}

namespace {

// Right-normed bracket of a word inside the free algebra.
FreeElement right_normed(const Word& w, int degree) {
    FreeElement acc = FreeElement::letter(degree, w.letter(w.len - 1));
    for (int i = w.len - 2; i >= 0; --i) acc = commutator(FreeElement::letter(degree, w.letter(i)), acc);
    return acc;
}

}  // namespace

FreeElement LiePolynomial::expand(int degree) const {
    FreeElement r(degree);
    for (const auto& [q, w] : terms) r += right_normed(w, degree) * q;
    return r;
}

std::string LiePolynomial::to_string() const {
    std::string out;
    for (const auto& [q, w] : terms) {
        std::string br;
        for (int i = 0; i < w.len - 1; ++i) br += std::string("[") + (w.letter(i) ? "Y" : "X") + ",";
        br += w.letter(w.len - 1) ? "Y" : "X";
        br += std::string(std::size_t(w.len - 1), ']');
        if (!out.empty()) out += q < 0 ? " - " : " + ";
        else if (q < 0) out += "-";
        out += q_to_string(abs(q)) + "*" + br;
    }
    return out.empty() ? "0" : out;
}

LiePolynomial to_lie_polynomial(const FreeElement& homogeneous, int k) {
    LiePolynomial p;
    for (const auto& [w, q] : homogeneous.terms()) {
        if (w.len != k) throw std::invalid_argument("to_lie_polynomial: element is not homogeneous");
        if (w.len == 1 && k == 1) {
            p.terms.emplace_back(q, w);
            continue;
        }
        p.terms.emplace_back(q / k, w);
    }
    // Merge terms with an identical bracket: [x,[..,[a,b]]] and the word ending in
    // b,a differ only by sign.
    std::map<Word, Q> merged;
    for (const auto& [q, w] : p.terms) {
        Word key = w;
        Q s = q;
        if (w.len >= 2 && w.letter(w.len - 2) > w.letter(w.len - 1)) {
            key.bits ^= (1u << (w.len - 2)) | (1u << (w.len - 1));
            s = -s;
        }
        if (w.len >= 2 && w.letter(w.len - 2) == w.letter(w.len - 1)) continue;  // [a,a] = 0
        merged[key] += s;
    }
    LiePolynomial out;
    for (const auto& [w, q] : merged)
        if (q != 0) out.terms.emplace_back(q, w);
    return out;
}

namespace {

struct Tables {
    FreeElement bch_free = FreeElement(kMaxBchDegree);
    std::vector<FreeElement> sep_free;
    std::vector<LiePolynomial> bch_lie, sep_lie;
};

const Tables& tables() {
    static Tables t;
    static std::once_flag once;
    std::call_once(once, [] {
        const int D = kMaxBchDegree;
        FreeElement X = FreeElement::letter(D, 0), Y = FreeElement::letter(D, 1);
        FreeElement one(D);
        one[Word{}] = 1;
        FreeElement Z = (X.exp() * Y.exp() - one).log1p();
        t.bch_free = Z - X - Y;

        t.sep_free.assign(D + 1, FreeElement(D));
        FreeElement B0(D), B1(D);
        for (int k = 2; k <= D; ++k) {
            FreeElement W = (B0.exp() * (X + Y + B1).exp() - one).log1p();
            FreeElement Bk = Z.homogeneous(k) - W.homogeneous(k);
            t.sep_free[std::size_t(k)] = Bk;
            if (k % 2 == 0) B0 += Bk;
            else B1 += Bk;
        }
        t.bch_lie.assign(D + 1, LiePolynomial{});
        t.sep_lie.assign(D + 1, LiePolynomial{});
        for (int k = 2; k <= D; ++k) {
            t.bch_lie[std::size_t(k)] = to_lie_polynomial(t.bch_free.homogeneous(k), k);
            t.sep_lie[std::size_t(k)] = to_lie_polynomial(t.sep_free[std::size_t(k)], k);
        }
    });
    return t;
}

void check_degree(int k) {
    if (k < 2 || k > kMaxBchDegree) throw std::invalid_argument("BCH degree must lie in 2..8");
}

}  // namespace

const LiePolynomial& bch_component(int k) {
    check_degree(k);
    return tables().bch_lie[std::size_t(k)];
}

const LiePolynomial& separation_component(int k) {
    check_degree(k);
    return tables().sep_lie[std::size_t(k)];
}

FreeElement bch_component_free(int k) {
    check_degree(k);
    return tables().bch_free.homogeneous(k);
}

FreeElement separation_component_free(int k) {
    check_degree(k);
    return tables().sep_free[std::size_t(k)];
}

}  // namespace superalg
