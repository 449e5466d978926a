#pragma once
// Independent reference implementations used by the tests.  They work on
// explicit generator words instead of bitmasks so they share no code with
// the library.

#include <map>
#include <random>
#include <vector>

#include "superalg/grassmann.hpp"

namespace oracle {

// Sign of the permutation sorting the word, by bubble sort; 0 on a repeat.
inline int bubble_sign(std::vector<int> w) {
    int sign = 1;
    for (std::size_t a = 0; a < w.size(); ++a)
        for (std::size_t b = 0; b + 1 < w.size() - a; ++b) {
            if (w[b] == w[b + 1]) return 0;
            if (w[b] > w[b + 1]) {
                std::swap(w[b], w[b + 1]);
                sign = -sign;
            }
        }
    for (std::size_t b = 0; b + 1 < w.size(); ++b)
        if (w[b] == w[b + 1]) return 0;
    return sign;
}

inline std::vector<int> word(superalg::Mask I) {
    std::vector<int> w;
    for (int j = 0; j < 32; ++j)
        if (I >> j & 1u) w.push_back(j + 1);
    return w;
}

// Product through concatenated words.
template <class S>
superalg::Grassmann<S> multiply(const superalg::Grassmann<S>& a, const superalg::Grassmann<S>& b) {
    superalg::Grassmann<S> r(a.n());
    for (superalg::Mask I = 0; I < a.size(); ++I)
        for (superalg::Mask J = 0; J < b.size(); ++J) {
            auto w = word(I);
            auto wj = word(J);
            w.insert(w.end(), wj.begin(), wj.end());
            int s = bubble_sign(w);
            if (s == 0) continue;
            r[I | J] += S(s) * a[I] * b[J];
        }
    return r;
}

inline superalg::Q random_q(std::mt19937_64& rng, int range = 5) {
    std::uniform_int_distribution<int> num(-range, range), den(1, 4);
    superalg::Q q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

template <class S>
superalg::Grassmann<S> random_element(std::mt19937_64& rng, int n, double density = 0.6);

template <>
inline superalg::Grassmann<superalg::Q> random_element(std::mt19937_64& rng, int n, double density) {
    superalg::Grassmann<superalg::Q> g(n);
    std::bernoulli_distribution keep(density);
    for (superalg::Mask I = 0; I < g.size(); ++I)
        if (keep(rng)) g[I] = random_q(rng);
    return g;
}

template <>
inline superalg::Grassmann<superalg::CQ> random_element(std::mt19937_64& rng, int n, double density) {
    superalg::Grassmann<superalg::CQ> g(n);
    std::bernoulli_distribution keep(density);
    for (superalg::Mask I = 0; I < g.size(); ++I)
        if (keep(rng)) g[I] = superalg::CQ(random_q(rng), random_q(rng));
    return g;
}

template <class S>
superalg::Grassmann<S> random_homogeneous(std::mt19937_64& rng, int n, int parity) {
    auto g = random_element<S>(rng, n);
    return parity ? g.odd_part() : g.even_part();
}

}  // namespace oracle

#include <algorithm>
#include <numeric>

#include "superalg/supermatrix.hpp"

namespace oracle {

// Leibniz expansion over all permutations; entries must commute.
template <class T>
T leibniz_det(const superalg::Matrix<T>& m, const T& one) {
    int k = m.rows();
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    T sum = one - one;
    do {
        T term = one;
        for (int i = 0; i < k; ++i) term = term * m(i, perm[i]);
        int s = bubble_sign(perm);
        // bubble_sign treats the permutation as a word of distinct values
        if (s > 0) sum = sum + term;
        else sum = sum - term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

// Even supermatrix with random entries and invertible body.
inline superalg::SuperMatrix<superalg::Q> random_even_supermatrix(std::mt19937_64& rng, int p, int q, int n) {
    using namespace superalg;
    while (true) {
        SuperMatrix<Q> m(p, q, n);
        for (int i = 0; i < p + q; ++i)
            for (int j = 0; j < p + q; ++j) {
                int par = (i >= p) ^ (j >= p);
                auto x = random_homogeneous<Q>(rng, n, par);
                if (par == 0) x[0] = random_q(rng, 3);
                m(i, j) = x;
            }
        Matrix<Q> b = m.body();
        if (determinant(b.block(0, 0, p, p)) == 0 || determinant(b.block(p, p, q, q)) == 0) continue;
        m.declare(MatrixParity::Even);
        return m;
    }
}

}  // namespace oracle

#include "superalg/superliealg.hpp"

namespace oracle {

// Element of the odd part: odd basis vectors with random odd coefficients
// built from the given generators only.
inline superalg::LieElement<superalg::Q> random_odd_part(std::mt19937_64& rng, const superalg::SuperLieAlgebra& alg, int n,
                                                         superalg::Mask gens) {
    using namespace superalg;
    LieElement<Q> x(alg, n);
    auto list = IndexSet(gens).to_list();
    for (int i = alg.even_dim(); i < alg.dim(); ++i) {
        Grassmann<Q> c(n);
        for (int j : list) c += Grassmann<Q>::generator(n, j) * random_q(rng, 3);
        // occasionally a cubic term in the same generators
        if (list.size() >= 3 && rng() % 2)
            c += Grassmann<Q>::generator(n, list[0]) * Grassmann<Q>::generator(n, list[1]) *
                 Grassmann<Q>::generator(n, list[2]) * random_q(rng, 2);
        x[i] = c;
    }
    return x;
}

// Even element of g (x) Lambda_n: even coefficients on e_i, odd on f_j.
inline superalg::LieElement<superalg::Q> random_even_element(std::mt19937_64& rng, const superalg::SuperLieAlgebra& alg,
                                                             int n) {
    using namespace superalg;
    LieElement<Q> x(alg, n);
    for (int i = 0; i < alg.dim(); ++i) x[i] = random_homogeneous<Q>(rng, n, alg.parity(i));
    return x;
}

}  // namespace oracle

namespace oracle {

inline superalg::CQ random_cq(std::mt19937_64& rng, int range = 5) {
    return superalg::CQ(random_q(rng, range), random_q(rng, range));
}

// Graded symmetric, generally non-homogeneous form on C^{d0|d1}, made
// non-degenerate by a dominant diagonal.
inline superalg::Matrix<superalg::CQ> random_graded_symmetric(std::mt19937_64& rng, int d0, int d1) {
    using namespace superalg;
    int d = d0 + d1;
    Matrix<CQ> m(d, d, CQ());
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            bool odd_a = a >= d0, odd_b = b >= d0;
            if (a == b) {
                Q big = random_q(rng, 3) + 20 * (a + 1);
                m(a, a) = odd_a ? CQ(0, big) : CQ(big);
                continue;
            }
            CQ v = random_cq(rng, 3);
            m(a, b) = v;
            m(b, a) = (odd_a && odd_b) ? -conj(v) : conj(v);
        }
    return m;
}

// Positive definite hermitian block-diagonal metric.
inline superalg::Matrix<superalg::CQ> random_metric(std::mt19937_64& rng, int d0, int d1) {
    using namespace superalg;
    int d = d0 + d1;
    Matrix<CQ> a(d, d, CQ());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if ((i >= d0) == (j >= d0)) a(i, j) = random_cq(rng, 3);
    auto g = adjoint(a) * a;
    for (int i = 0; i < d; ++i) g(i, i) += CQ(1);
    return g;
}

// Even super metric: positive on E0, i times positive on E1.
inline superalg::Matrix<superalg::CQ> random_super_metric(std::mt19937_64& rng, int d0, int d1) {
    using namespace superalg;
    auto g = random_metric(rng, d0, d1);
    for (int i = d0; i < d0 + d1; ++i)
        for (int j = d0; j < d0 + d1; ++j) g(i, j) = CQ(0, 1) * g(i, j);
    return g;
}

}  // namespace oracle
