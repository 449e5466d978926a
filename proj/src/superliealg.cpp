#include "superalg/superliealg.hpp"

#include <regex>

namespace superalg {

namespace {

Matrix<Q> unit(int dim, int i, int j, const Q& v = Q(1)) {
    Matrix<Q> m(dim, dim, Q(0));
    m(i, j) = v;
    return m;
}

Matrix<Q> scalar_times(const Q& s, const Matrix<Q>& m) {
    return scale(m, s);
}

}  // namespace

SuperLieAlgebra::SuperLieAlgebra(std::string name, int d, int m, std::vector<std::string> names,
                                 const std::vector<Bracket>& table)
    : name_(std::move(name)), d_(d), m_(m), names_(std::move(names)) {
    if (d < 0 || m < 0) throw StructureError("negative dimension");
    if (int(names_.size()) != d + m) throw StructureError("need one name per basis vector");
    int D = dim();
    c_.assign(std::size_t(D) * D * D, Q(0));
    std::vector<bool> given(std::size_t(D) * D, false);
    for (const auto& b : table) {
        if (b.i < 0 || b.i >= D || b.j < 0 || b.j >= D) throw StructureError("bracket index out of range");
        if (given[std::size_t(b.i) * D + b.j]) throw StructureError("bracket listed twice");
        given[std::size_t(b.i) * D + b.j] = true;
        for (const auto& [k, v] : b.result) {
            if (k < 0 || k >= D) throw StructureError("bracket result index out of range");
            cref(b.i, b.j, k) = v;
        }
    }
    for (const auto& b : table) {
        if (given[std::size_t(b.j) * D + b.i]) continue;
        int s = parity(b.i) && parity(b.j) ? 1 : -1;
        for (int k = 0; k < D; ++k) cref(b.j, b.i, k) = c(b.i, b.j, k) * s;
    }
    validate();
}

Q SuperLieAlgebra::parity_defect() const {
    Q worst(0);
    int D = dim();
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k)
                if (parity(k) != (parity(i) ^ parity(j)) && c(i, j, k) != 0) worst = std::max(worst, Q(abs(c(i, j, k))));
    return worst;
}

Q SuperLieAlgebra::antisymmetry_defect() const {
    Q worst(0);
    int D = dim();
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k) {
                Q s = (parity(i) && parity(j)) ? Q(1) : Q(-1);
                Q r = c(i, j, k) - s * c(j, i, k);
                worst = std::max(worst, Q(abs(r)));
            }
    return worst;
}

Q SuperLieAlgebra::jacobi_defect() const {
    Q worst(0);
    int D = dim();
    auto nested = [&](int a, int b, int cc, int out) {
        // component 'out' of [b_a, [b_b, b_c]]
        Q s(0);
        for (int k = 0; k < D; ++k) {
            const Q& x = c(b, cc, k);
            if (x != 0) s += x * c(a, k, out);
        }
        return s;
    };
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            for (int k = 0; k < D; ++k)
                for (int o = 0; o < D; ++o) {
                    Q t1 = nested(i, j, k, o) * ((parity(i) && parity(k)) ? -1 : 1);
                    Q t2 = nested(j, k, i, o) * ((parity(j) && parity(i)) ? -1 : 1);
                    Q t3 = nested(k, i, j, o) * ((parity(k) && parity(j)) ? -1 : 1);
                    worst = std::max(worst, Q(abs(t1 + t2 + t3)));
                }
    return worst;
}

void SuperLieAlgebra::validate() const {
    if (parity_defect() != 0) throw StructureError(name_ + ": bracket does not respect the grading");
    if (antisymmetry_defect() != 0) throw StructureError(name_ + ": graded antisymmetry fails");
    if (jacobi_defect() != 0) throw StructureError(name_ + ": graded Jacobi identity fails");
}

int SuperLieAlgebra::index_of(const std::string& name) const {
    for (int i = 0; i < dim(); ++i)
        if (names_[std::size_t(i)] == name) return i;
    throw std::invalid_argument("unknown basis vector '" + name + "'");
}

void SuperLieAlgebra::set_matrix_rep(MatrixRep rep) {
    int D = dim(), N = rep.p + rep.q;
    if (int(rep.basis.size()) != D) throw StructureError("matrix representation needs one matrix per basis vector");
    for (int b = 0; b < D; ++b) {
        const auto& F = rep.basis[std::size_t(b)];
        if (F.rows() != N || F.cols() != N) throw StructureError("matrix representation: wrong matrix size");
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                int block = (i >= rep.p) ^ (j >= rep.p);
                if (F(i, j) != 0 && block != parity(b)) throw StructureError("matrix representation: parity mismatch");
            }
    }
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
            const auto& A = rep.basis[std::size_t(i)];
            const auto& B = rep.basis[std::size_t(j)];
            Q s = (parity(i) && parity(j)) ? Q(-1) : Q(1);
            Matrix<Q> lhs = A * B - scalar_times(s, B * A);
            Matrix<Q> rhs(N, N, Q(0));
            for (int k = 0; k < D; ++k)
                if (c(i, j, k) != 0) rhs += scalar_times(c(i, j, k), rep.basis[std::size_t(k)]);
            if (lhs != rhs) throw StructureError("matrix representation does not reproduce the brackets");
        }
    Matrix<Q> flat(D, N * N, Q(0));
    for (int b = 0; b < D; ++b)
        for (int k = 0; k < N * N; ++k) flat(b, k) = rep.basis[std::size_t(b)].data()[std::size_t(k)];
    if (rank(flat) != D) throw StructureError("matrix representation is not faithful");
    rep_ = std::move(rep);
}

SuperLieAlgebra SuperLieAlgebra::heisenberg_like(int m) {
    if (m < 1) throw std::invalid_argument("heisenberg-like needs m >= 1");
    std::vector<std::string> names{"e"};
    std::vector<Bracket> table;
    for (int j = 1; j <= m; ++j) {
        names.push_back("f" + std::to_string(j));
        table.push_back({j, j, {{0, Q(-1)}}});
    }
    SuperLieAlgebra alg("heisenberg-like(" + std::to_string(m) + ")", 1, m, names, table);
    // Even basis u0, u1; odd basis v_1..v_m.
    int N = 2 + m;
    MatrixRep rep{2, m, {}};
    rep.basis.push_back(unit(N, 0, 1));
    for (int j = 0; j < m; ++j) rep.basis.push_back(unit(N, 0, 2 + j) + unit(N, 2 + j, 1, Q(-1, 2)));
    alg.set_matrix_rep(rep);
    return alg;
}

SuperLieAlgebra SuperLieAlgebra::axi_beta() {
    SuperLieAlgebra alg("axi-beta", 1, 1, {"e", "f"}, {{0, 1, {{1, Q(1)}}}});
    alg.set_matrix_rep(MatrixRep{1, 1, {unit(2, 0, 0), unit(2, 0, 1)}});
    return alg;
}

SuperLieAlgebra SuperLieAlgebra::osp12() {
    // e1, e2, e3, f1, f2
    std::vector<Bracket> t = {
        {0, 1, {{1, Q(2)}}},  {0, 2, {{2, Q(-2)}}}, {1, 2, {{0, Q(1)}}},
        {0, 3, {{3, Q(1)}}},  {2, 3, {{4, Q(-1)}}},
        {0, 4, {{4, Q(-1)}}}, {1, 4, {{3, Q(-1)}}},
        {3, 3, {{1, Q(-2)}}}, {3, 4, {{0, Q(-1)}}}, {4, 4, {{2, Q(2)}}},
    };
    SuperLieAlgebra alg("osp12", 3, 2, {"e1", "e2", "e3", "f1", "f2"}, t);
    MatrixRep rep{1, 2, {}};
    rep.basis.push_back(unit(3, 1, 1) + unit(3, 2, 2, Q(-1)));
    rep.basis.push_back(unit(3, 1, 2));
    rep.basis.push_back(unit(3, 2, 1));
    rep.basis.push_back(unit(3, 0, 2) + unit(3, 1, 0, Q(-1)));
    rep.basis.push_back(unit(3, 0, 1) + unit(3, 2, 0));
    alg.set_matrix_rep(rep);
    return alg;
}

SuperLieAlgebra SuperLieAlgebra::preset(const std::string& name) {
    if (name == "osp12") return osp12();
    if (name == "axi-beta") return axi_beta();
    std::smatch mt;
    static const std::regex hl(R"(heisenberg-like\((\d+)\))");
    if (std::regex_match(name, mt, hl)) return heisenberg_like(std::stoi(mt[1]));
    throw std::invalid_argument("unknown algebra preset '" + name + "'");
}

nlohmann::json SuperLieAlgebra::to_json() const {
    nlohmann::json basis = nlohmann::json::array(), brackets = nlohmann::json::array();
    for (int i = 0; i < dim(); ++i) basis.push_back({{"name", names_[std::size_t(i)]}, {"parity", parity(i)}});
    for (int i = 0; i < dim(); ++i)
        for (int j = i; j < dim(); ++j) {
            nlohmann::json res = nlohmann::json::object();
            for (int k = 0; k < dim(); ++k)
                if (c(i, j, k) != 0) res[names_[std::size_t(k)]] = q_to_string(c(i, j, k));
            if (!res.empty()) brackets.push_back({{"left", names_[std::size_t(i)]}, {"right", names_[std::size_t(j)]}, {"result", res}});
        }
    nlohmann::json j = {{"name", name_}, {"basis", basis}, {"brackets", brackets}};
    if (rep_) {
        nlohmann::json mats = nlohmann::json::array();
        for (const auto& F : rep_->basis) {
            nlohmann::json rows = nlohmann::json::array();
            for (int r = 0; r < F.rows(); ++r) {
                nlohmann::json row = nlohmann::json::array();
                for (int c2 = 0; c2 < F.cols(); ++c2) row.push_back(q_to_string(F(r, c2)));
                rows.push_back(row);
            }
            mats.push_back(rows);
        }
        j["matrix_rep"] = {{"p", rep_->p}, {"q", rep_->q}, {"matrices", mats}};
    }
    return j;
}

SuperLieAlgebra SuperLieAlgebra::from_json(const nlohmann::json& j) {
    std::vector<std::string> names;
    std::vector<int> par;
    for (const auto& b : j.at("basis")) {
        names.push_back(b.at("name").get<std::string>());
        par.push_back(b.at("parity").get<int>());
    }
    // Even basis vectors must come first.
    int d = 0;
    while (d < int(par.size()) && par[std::size_t(d)] == 0) ++d;
    for (std::size_t i = std::size_t(d); i < par.size(); ++i)
        if (par[i] != 1) throw StructureError("list even basis vectors before odd ones");
    auto idx = [&](const std::string& s) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == s) return int(i);
        throw StructureError("unknown basis vector '" + s + "'");
    };
    std::vector<Bracket> table;
    for (const auto& b : j.value("brackets", nlohmann::json::array())) {
        Bracket br{idx(b.at("left").get<std::string>()), idx(b.at("right").get<std::string>()), {}};
        for (const auto& [k, v] : b.at("result").items())
            br.result[idx(k)] = v.is_string() ? q_from_string(v.get<std::string>()) : Q(v.get<long>());
        table.push_back(br);
    }
    SuperLieAlgebra alg(j.value("name", std::string("custom")), d, int(names.size()) - d, names, table);
    if (j.contains("matrix_rep")) {
        const auto& r = j["matrix_rep"];
        MatrixRep rep{r.at("p").get<int>(), r.at("q").get<int>(), {}};
        for (const auto& mj : r.at("matrices")) {
            int N = int(mj.size());
            Matrix<Q> F(N, N, Q(0));
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b) {
                    const auto& e = mj[std::size_t(a)][std::size_t(b)];
                    F(a, b) = e.is_string() ? q_from_string(e.get<std::string>()) : Q(e.get<long>());
                }
            rep.basis.push_back(F);
        }
        alg.set_matrix_rep(rep);
    }
    return alg;
}

}  // namespace superalg
