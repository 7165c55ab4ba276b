#include "cryospike/linear_system.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace cryospike {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    }
    // Smaller id wins as root, so the ground supernode is always rooted at 0.
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;
    }
};

struct FinBranch { int a; int b; double r; std::string id; };
struct ZeroBranch { int a; int b; std::string id; };
struct IndBranch { int a; int b; double L; std::string id; };
struct SrcBranch { int from; int to; std::string id; };

enum class NodeClass { Ground, Resistive, Inductive };

} // namespace

const ObsRow& LinearSystem::branch_row(const std::string& element_id) const {
    auto it = branch.find(element_id);
    if (it == branch.end())
        throw ConfigError("no branch row for element '" + element_id + "'");
    return it->second;
}

Eigen::VectorXd LinearSystem::reduce(const Eigen::VectorXd& x_full) const {
    if (x_full.size() != full_count())
        throw DimensionError("full current vector has wrong length");
    Eigen::VectorXd z(n());
    for (int i = 0; i < n(); ++i) z(i) = x_full(state_full_index[static_cast<std::size_t>(i)]);
    return z;
}

Eigen::VectorXd LinearSystem::full_currents(const Eigen::VectorXd& z,
                                            const Eigen::VectorXd& u) const {
    if (z.size() != n() || u.size() != input_count())
        throw DimensionError("state or input vector has wrong length");
    return S * z + T * u;
}

Eigen::VectorXd LinearSystem::project_full(const Eigen::VectorXd& x_full,
                                           const Eigen::VectorXd& u) const {
    if (x_full.size() != full_count() || u.size() != input_count())
        throw DimensionError("state or input vector has wrong length");
    if (constraint_C.rows() == 0) return x_full;
    return x_full + impulse_map * (constraint_F * u - constraint_C * x_full);
}

LinearSystem build_mode_system(const Netlist& nl, const Mode& mode) {
    const int N = nl.node_count();
    const int K = static_cast<int>(nl.inductor_ids().size());
    const int m = static_cast<int>(nl.source_ids().size());

    // --- resolve every element for this mode --------------------------------
    std::vector<FinBranch> fin;
    std::vector<ZeroBranch> zero;
    std::vector<IndBranch> ind(static_cast<std::size_t>(K));
    std::vector<SrcBranch> src(static_cast<std::size_t>(m));
    {
        int ki = 0, si = 0;
        for (const auto& e : nl.elements()) {
            if (const auto* s = std::get_if<CurrentSource>(&e.body)) {
                src[static_cast<std::size_t>(si++)] = {s->node_from, s->node_to, e.id};
            } else if (const auto* r = std::get_if<Resistor>(&e.body)) {
                if (r->ohms == 0.0)
                    zero.push_back({r->node_a, r->node_b, e.id});
                else
                    fin.push_back({r->node_a, r->node_b, r->ohms, e.id});
            } else if (const auto* l = std::get_if<Inductor>(&e.body)) {
                ind[static_cast<std::size_t>(ki++)] = {l->node_a, l->node_b, l->henries, e.id};
            } else {
                const auto& sw = std::get<SwitchResistor>(e.body);
                const double r = switch_resistance(nl.device(sw.device), mode.at(sw.device));
                if (r == 0.0)
                    zero.push_back({sw.node_a, sw.node_b, e.id});
                else
                    fin.push_back({sw.node_a, sw.node_b, r, e.id});
            }
        }
    }

    // --- merge zero-resistance branches into supernodes ---------------------
    UnionFind uf(N);
    for (const auto& zb : zero) uf.unite(zb.a, zb.b);
    std::vector<int> rep(static_cast<std::size_t>(N));
    for (int v = 0; v < N; ++v) rep[static_cast<std::size_t>(v)] = uf.find(v);

    // --- classify supernodes ------------------------------------------------
    std::vector<char> has_fin(static_cast<std::size_t>(N), 0);
    std::vector<char> has_ind(static_cast<std::size_t>(N), 0);
    for (const auto& f : fin) {
        const int ra = rep[static_cast<std::size_t>(f.a)], rb = rep[static_cast<std::size_t>(f.b)];
        if (ra != rb) { has_fin[static_cast<std::size_t>(ra)] = 1; has_fin[static_cast<std::size_t>(rb)] = 1; }
    }
    for (const auto& l : ind) {
        const int ra = rep[static_cast<std::size_t>(l.a)], rb = rep[static_cast<std::size_t>(l.b)];
        if (ra != rb) { has_ind[static_cast<std::size_t>(ra)] = 1; has_ind[static_cast<std::size_t>(rb)] = 1; }
    }

    std::vector<NodeClass> cls(static_cast<std::size_t>(N), NodeClass::Ground);
    std::vector<int> ridx(static_cast<std::size_t>(N), -1), jidx(static_cast<std::size_t>(N), -1);
    int nR = 0, nJ = 0;
    for (int v = 0; v < N; ++v) {
        if (rep[static_cast<std::size_t>(v)] != v || v == 0) continue;
        if (has_fin[static_cast<std::size_t>(v)]) {
            cls[static_cast<std::size_t>(v)] = NodeClass::Resistive;
            ridx[static_cast<std::size_t>(v)] = nR++;
        } else if (has_ind[static_cast<std::size_t>(v)]) {
            cls[static_cast<std::size_t>(v)] = NodeClass::Inductive;
            jidx[static_cast<std::size_t>(v)] = nJ++;
        } else {
            throw AssemblyError("node " + std::to_string(v) +
                                " has no resistive or inductive path in mode " + mode.key());
        }
    }

    auto rep_of = [&](int v) { return rep[static_cast<std::size_t>(v)]; };
    auto cls_of = [&](int v) { return cls[static_cast<std::size_t>(rep_of(v))]; };

    // --- resistive subnetwork: G v_R = Px x + Pu u --------------------------
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nR, nR);
    Eigen::MatrixXd Px = Eigen::MatrixXd::Zero(nR, K);
    Eigen::MatrixXd Pu = Eigen::MatrixXd::Zero(nR, m);
    for (const auto& f : fin) {
        const int ra = rep_of(f.a), rb = rep_of(f.b);
        if (ra == rb) continue;
        const double g = 1.0 / f.r;
        const int ia = ridx[static_cast<std::size_t>(ra)], ib = ridx[static_cast<std::size_t>(rb)];
        if (ia >= 0) G(ia, ia) += g;
        if (ib >= 0) G(ib, ib) += g;
        if (ia >= 0 && ib >= 0) { G(ia, ib) -= g; G(ib, ia) -= g; }
    }
    for (int k = 0; k < K; ++k) {
        const auto& l = ind[static_cast<std::size_t>(k)];
        const int ra = rep_of(l.a), rb = rep_of(l.b);
        if (ra != rb) {
            if (ridx[static_cast<std::size_t>(ra)] >= 0) Px(ridx[static_cast<std::size_t>(ra)], k) -= 1.0;
            if (ridx[static_cast<std::size_t>(rb)] >= 0) Px(ridx[static_cast<std::size_t>(rb)], k) += 1.0;
        }
    }
    for (int s = 0; s < m; ++s) {
        const auto& q = src[static_cast<std::size_t>(s)];
        const int rf = rep_of(q.from), rt = rep_of(q.to);
        if (rf != rt) {
            if (ridx[static_cast<std::size_t>(rf)] >= 0) Pu(ridx[static_cast<std::size_t>(rf)], s) -= 1.0;
            if (ridx[static_cast<std::size_t>(rt)] >= 0) Pu(ridx[static_cast<std::size_t>(rt)], s) += 1.0;
        }
    }

    Eigen::FullPivLU<Eigen::MatrixXd> luG;
    if (nR > 0) luG.compute(G);
    if (nR > 0 && !luG.isInvertible()) {
        const Eigen::MatrixXd ker = luG.kernel();
        int worst = 0;
        ker.col(0).cwiseAbs().maxCoeff(&worst);
        int node = 0;
        for (int v = 0; v < N; ++v)
            if (ridx[static_cast<std::size_t>(v)] == worst) { node = v; break; }
        throw AssemblyError("resistive subnetwork is singular (no ground path) at node " +
                            std::to_string(node) + " in mode " + mode.key());
    }
    const Eigen::MatrixXd VRx = nR > 0 ? Eigen::MatrixXd(luG.solve(Px)) : Eigen::MatrixXd::Zero(0, K);
    const Eigen::MatrixXd VRu = nR > 0 ? Eigen::MatrixXd(luG.solve(Pu)) : Eigen::MatrixXd::Zero(0, m);

    // --- inductive cut-set nodes: voltages from constraint preservation -----
    Eigen::MatrixXd LJ = Eigen::MatrixXd::Zero(nJ, nJ);
    Eigen::MatrixXd Rx = Eigen::MatrixXd::Zero(nJ, K);
    Eigen::MatrixXd Ru = Eigen::MatrixXd::Zero(nJ, m);
    for (const auto& l : ind) {
        const int ra = rep_of(l.a), rb = rep_of(l.b);
        if (ra == rb) continue;
        const double w = 1.0 / l.L;
        auto couple = [&](int self, int other) {
            if (cls[static_cast<std::size_t>(self)] != NodeClass::Inductive) return;
            const int j = jidx[static_cast<std::size_t>(self)];
            LJ(j, j) += w;
            if (cls[static_cast<std::size_t>(other)] == NodeClass::Inductive) {
                LJ(j, jidx[static_cast<std::size_t>(other)]) -= w;
            } else if (cls[static_cast<std::size_t>(other)] == NodeClass::Resistive) {
                Rx.row(j) += w * VRx.row(ridx[static_cast<std::size_t>(other)]);
                Ru.row(j) += w * VRu.row(ridx[static_cast<std::size_t>(other)]);
            }
        };
        couple(ra, rb);
        couple(rb, ra);
    }

    Eigen::FullPivLU<Eigen::MatrixXd> luJ;
    if (nJ > 0) luJ.compute(LJ);
    if (nJ > 0 && !luJ.isInvertible()) {
        const Eigen::MatrixXd ker = luJ.kernel();
        int worst = 0;
        ker.col(0).cwiseAbs().maxCoeff(&worst);
        int node = 0;
        for (int v = 0; v < N; ++v)
            if (jidx[static_cast<std::size_t>(v)] == worst) { node = v; break; }
        throw AssemblyError("inductive subnetwork is floating at node " + std::to_string(node) +
                            " in mode " + mode.key());
    }
    const Eigen::MatrixXd VJx = nJ > 0 ? Eigen::MatrixXd(luJ.solve(Rx)) : Eigen::MatrixXd::Zero(0, K);
    const Eigen::MatrixXd VJu = nJ > 0 ? Eigen::MatrixXd(luJ.solve(Ru)) : Eigen::MatrixXd::Zero(0, m);

    // --- node voltage rows over (x_full, u) ---------------------------------
    Eigen::MatrixXd Vx = Eigen::MatrixXd::Zero(N, K);
    Eigen::MatrixXd VuF = Eigen::MatrixXd::Zero(N, m);
    for (int v = 0; v < N; ++v) {
        const int r = rep_of(v);
        if (cls[static_cast<std::size_t>(r)] == NodeClass::Resistive) {
            Vx.row(v) = VRx.row(ridx[static_cast<std::size_t>(r)]);
            VuF.row(v) = VRu.row(ridx[static_cast<std::size_t>(r)]);
        } else if (cls[static_cast<std::size_t>(r)] == NodeClass::Inductive) {
            Vx.row(v) = VJx.row(jidx[static_cast<std::size_t>(r)]);
            VuF.row(v) = VJu.row(jidx[static_cast<std::size_t>(r)]);
        }
    }

    // --- full derivative d(x_full)/dt = Atil x_full + Btil u ----------------
    Eigen::MatrixXd Atil = Eigen::MatrixXd::Zero(K, K);
    Eigen::MatrixXd Btil = Eigen::MatrixXd::Zero(K, m);
    for (int k = 0; k < K; ++k) {
        const auto& l = ind[static_cast<std::size_t>(k)];
        Atil.row(k) = (Vx.row(l.a) - Vx.row(l.b)) / l.L;
        Btil.row(k) = (VuF.row(l.a) - VuF.row(l.b)) / l.L;
    }

    // --- cut-set constraints C x_full = F u ---------------------------------
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nJ, K);
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(nJ, m);
    for (int k = 0; k < K; ++k) {
        const auto& l = ind[static_cast<std::size_t>(k)];
        if (cls_of(l.a) == NodeClass::Inductive) C(jidx[static_cast<std::size_t>(rep_of(l.a))], k) += 1.0;
        if (cls_of(l.b) == NodeClass::Inductive) C(jidx[static_cast<std::size_t>(rep_of(l.b))], k) -= 1.0;
    }
    for (int s = 0; s < m; ++s) {
        const auto& q = src[static_cast<std::size_t>(s)];
        if (cls_of(q.to) == NodeClass::Inductive) F(jidx[static_cast<std::size_t>(rep_of(q.to))], s) += 1.0;
        if (cls_of(q.from) == NodeClass::Inductive) F(jidx[static_cast<std::size_t>(rep_of(q.from))], s) -= 1.0;
    }

    // --- reduce to an independent state subset (RREF over C) ----------------
    Eigen::MatrixXd Cw = C, Fw = F;
    std::vector<int> pivot_cols;
    int rank = 0;
    for (int k = 0; k < K && rank < nJ; ++k) {
        int prow = -1;
        double best = 1e-9;
        for (int r = rank; r < nJ; ++r)
            if (std::abs(Cw(r, k)) > best) { best = std::abs(Cw(r, k)); prow = r; }
        if (prow < 0) continue;
        Cw.row(rank).swap(Cw.row(prow));
        Fw.row(rank).swap(Fw.row(prow));
        const double piv = Cw(rank, k);
        Cw.row(rank) /= piv;
        Fw.row(rank) /= piv;
        for (int r = 0; r < nJ; ++r) {
            if (r == rank) continue;
            const double f = Cw(r, k);
            if (f != 0.0) {
                Cw.row(r) -= f * Cw.row(rank);
                Fw.row(r) -= f * Fw.row(rank);
            }
        }
        pivot_cols.push_back(k);
        ++rank;
    }
    for (int r = rank; r < nJ; ++r) {
        // A leftover row with nonzero source coupling demands current from a
        // node no inductor can supply.
        if (Fw.row(r).cwiseAbs().maxCoeff() > 1e-9)
            throw AssemblyError("source drives a pure-inductor cut with no inductive path in mode " +
                                mode.key());
    }

    const int n = K - rank;
    std::vector<char> is_pivot(static_cast<std::size_t>(K), 0);
    for (int pc : pivot_cols) is_pivot[static_cast<std::size_t>(pc)] = 1;
    std::vector<int> free_cols;
    for (int k = 0; k < K; ++k)
        if (!is_pivot[static_cast<std::size_t>(k)]) free_cols.push_back(k);

    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(K, n);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(K, m);
    for (int j = 0; j < n; ++j) S(free_cols[static_cast<std::size_t>(j)], j) = 1.0;
    for (int r = 0; r < rank; ++r) {
        const int pk = pivot_cols[static_cast<std::size_t>(r)];
        T.row(pk) = Fw.row(r);
        for (int j = 0; j < n; ++j)
            S(pk, j) = -Cw(r, free_cols[static_cast<std::size_t>(j)]);
    }

    LinearSystem sys;
    sys.A.resize(n, n);
    sys.B.resize(n, m);
    for (int j = 0; j < n; ++j) {
        const int fk = free_cols[static_cast<std::size_t>(j)];
        sys.A.row(j) = Atil.row(fk) * S;
        sys.B.row(j) = Atil.row(fk) * T + Btil.row(fk);
    }
    sys.S = S;
    sys.T = T;
    sys.Vz = Vx * S;
    sys.Vu = Vx * T + VuF;
    sys.constraint_C = C;
    sys.constraint_F = F;

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(K, nJ);
    for (int k = 0; k < K; ++k) {
        const auto& l = ind[static_cast<std::size_t>(k)];
        const int ra = rep_of(l.a), rb = rep_of(l.b);
        if (ra == rb) continue;
        if (cls[static_cast<std::size_t>(ra)] == NodeClass::Inductive)
            M(k, jidx[static_cast<std::size_t>(ra)]) += 1.0 / l.L;
        if (cls[static_cast<std::size_t>(rb)] == NodeClass::Inductive)
            M(k, jidx[static_cast<std::size_t>(rb)]) -= 1.0 / l.L;
    }
    sys.impulse_map = nJ > 0 ? Eigen::MatrixXd(luJ.solve(M.transpose()).transpose())
                             : Eigen::MatrixXd::Zero(K, 0);
    sys.jump = nJ > 0 ? Eigen::MatrixXd(sys.impulse_map * F) : Eigen::MatrixXd::Zero(K, m);

    for (int j = 0; j < n; ++j) {
        const int fk = free_cols[static_cast<std::size_t>(j)];
        sys.state_full_index.push_back(fk);
        sys.state_inductors.push_back(ind[static_cast<std::size_t>(fk)].id);
    }
    sys.source_ids = nl.source_ids();
    sys.inductor_ids = nl.inductor_ids();

    // --- branch-current rows over (x_full, u), then over (z, u) -------------
    std::map<std::string, std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd>> rows_full;
    auto zero_x = [&] { return Eigen::RowVectorXd::Zero(K); };
    auto zero_u = [&] { return Eigen::RowVectorXd::Zero(m); };
    for (int s = 0; s < m; ++s) {
        Eigen::RowVectorXd ru = zero_u();
        ru(s) = 1.0;
        rows_full[src[static_cast<std::size_t>(s)].id] = {zero_x(), ru};
    }
    for (int k = 0; k < K; ++k) {
        Eigen::RowVectorXd rx = zero_x();
        rx(k) = 1.0;
        rows_full[ind[static_cast<std::size_t>(k)].id] = {rx, zero_u()};
    }
    for (const auto& f : fin)
        rows_full[f.id] = {(Vx.row(f.a) - Vx.row(f.b)) / f.r, (VuF.row(f.a) - VuF.row(f.b)) / f.r};

    // Zero-resistance branch currents via a spanning-tree flow inside each
    // supernode: KCL at every member node determines the tree-edge flows;
    // cycle-closing zero branches carry no circulating current by convention.
    {
        std::map<int, std::vector<std::size_t>> by_rep;
        for (std::size_t zi = 0; zi < zero.size(); ++zi) {
            const auto& zb = zero[zi];
            if (zb.a == zb.b) {
                rows_full[zb.id] = {zero_x(), zero_u()};
                continue;
            }
            by_rep[rep_of(zb.a)].push_back(zi);
        }
        for (const auto& [r, zidx] : by_rep) {
            std::map<int, std::vector<std::pair<std::size_t, int>>> adj;
            for (std::size_t zi : zidx) {
                adj[zero[zi].a].push_back({zi, zero[zi].b});
                adj[zero[zi].b].push_back({zi, zero[zi].a});
                rows_full[zero[zi].id] = {zero_x(), zero_u()};
            }
            // known per-node leaving currents from everything but the zero branches
            std::map<int, std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd>> acc;
            for (const auto& [node, _] : adj) acc[node] = {zero_x(), zero_u()};
            auto add = [&](int node, const Eigen::RowVectorXd& rx, const Eigen::RowVectorXd& ru, double sgn) {
                auto it = acc.find(node);
                if (it == acc.end()) return;
                it->second.first += sgn * rx;
                it->second.second += sgn * ru;
            };
            for (int k = 0; k < K; ++k) {
                const auto& l = ind[static_cast<std::size_t>(k)];
                if (l.a == l.b) continue;
                const auto& row = rows_full[l.id];
                add(l.a, row.first, row.second, 1.0);
                add(l.b, row.first, row.second, -1.0);
            }
            for (const auto& f : fin) {
                if (f.a == f.b) continue;
                const auto& row = rows_full[f.id];
                add(f.a, row.first, row.second, 1.0);
                add(f.b, row.first, row.second, -1.0);
            }
            for (int s = 0; s < m; ++s) {
                const auto& q = src[static_cast<std::size_t>(s)];
                if (q.from == q.to) continue;
                const auto& row = rows_full[q.id];
                add(q.from, row.first, row.second, 1.0);
                add(q.to, row.first, row.second, -1.0);
            }
            // BFS spanning tree rooted at the supernode representative.
            const int root = r;
            std::map<int, std::pair<std::size_t, int>> tree; // node -> (edge, parent)
            std::vector<int> order;
            std::queue<int> q;
            std::map<int, char> seen;
            q.push(root);
            seen[root] = 1;
            while (!q.empty()) {
                const int v = q.front();
                q.pop();
                order.push_back(v);
                for (const auto& [zi, other] : adj[v]) {
                    if (seen.count(other)) continue;
                    seen[other] = 1;
                    tree[other] = {zi, v};
                    q.push(other);
                }
            }
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                const int v = *it;
                if (v == root) continue;
                const auto [zi, parent] = tree[v];
                const auto& zb = zero[zi];
                auto& a = acc[v];
                // flow oriented a->b; leaving(v) must vanish
                if (zb.a == v)
                    rows_full[zb.id] = {-a.first, -a.second};
                else
                    rows_full[zb.id] = {a.first, a.second};
                acc[parent].first += a.first;
                acc[parent].second += a.second;
            }
        }
    }

    for (const auto& [id, rf] : rows_full) {
        ObsRow row;
        row.wz = rf.first * S;
        row.wu = rf.first * T + rf.second;
        sys.branch[id] = std::move(row);
    }

    return sys;
}

Eigen::VectorXd equilibrium(const LinearSystem& sys, const Eigen::VectorXd& u) {
    if (u.size() != sys.input_count())
        throw DimensionError("input vector has wrong length");
    if (sys.n() == 0) return Eigen::VectorXd(0);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.A);
    if (!lu.isInvertible())
        throw SingularError("mode has no unique equilibrium (singular dynamics)");
    return lu.solve(-(sys.B * u));
}

Eigen::VectorXd node_voltages(const LinearSystem& sys, const Eigen::VectorXd& z,
                              const Eigen::VectorXd& u) {
    if (z.size() != sys.n() || u.size() != sys.input_count())
        throw DimensionError("state or input vector has wrong length");
    return sys.Vz * z + sys.Vu * u;
}

double kcl_residual(const Netlist& nl, const LinearSystem& sys,
                    const Eigen::VectorXd& z, const Eigen::VectorXd& u) {
    if (z.size() != sys.n() || u.size() != sys.input_count())
        throw DimensionError("state or input vector has wrong length");
    Eigen::VectorXd leaving = Eigen::VectorXd::Zero(nl.node_count());
    auto apply = [&](const std::string& id, int a, int b) {
        if (a == b) return;
        const double i = sys.branch_row(id).eval(z, u);
        leaving(a) += i;
        leaving(b) -= i;
    };
    for (const auto& e : nl.elements()) {
        if (const auto* s = std::get_if<CurrentSource>(&e.body)) apply(e.id, s->node_from, s->node_to);
        else if (const auto* r = std::get_if<Resistor>(&e.body)) apply(e.id, r->node_a, r->node_b);
        else if (const auto* l = std::get_if<Inductor>(&e.body)) apply(e.id, l->node_a, l->node_b);
        else {
            const auto& sw = std::get<SwitchResistor>(e.body);
            apply(e.id, sw.node_a, sw.node_b);
        }
    }
    return leaving.cwiseAbs().maxCoeff();
}

double kcl_residual(const Netlist& nl, const Mode& mode,
                    const Eigen::VectorXd& z, const Eigen::VectorXd& u) {
    return kcl_residual(nl, build_mode_system(nl, mode), z, u);
}

Eigen::VectorXd ramp_limit_currents(const Netlist& nl, const Mode& mode,
                                    const Eigen::VectorXd& u) {
    if (u.size() != static_cast<Eigen::Index>(nl.source_ids().size()))
        throw DimensionError("input vector has wrong length");
    const int N = nl.node_count();
    UnionFind uf(N);
    std::vector<IndBranch> ind;
    for (const auto& e : nl.elements()) {
        if (const auto* r = std::get_if<Resistor>(&e.body)) {
            if (r->ohms == 0.0) uf.unite(r->node_a, r->node_b);
        } else if (const auto* l = std::get_if<Inductor>(&e.body)) {
            ind.push_back({l->node_a, l->node_b, l->henries, e.id});
        } else if (const auto* sw = std::get_if<SwitchResistor>(&e.body)) {
            if (switch_resistance(nl.device(sw->device), mode.at(sw->device)) == 0.0)
                uf.unite(sw->node_a, sw->node_b);
        }
    }
    auto rep_of = [&](int v) { return uf.find(v); };

    std::vector<int> lidx(static_cast<std::size_t>(N), -1);
    int nL = 0;
    for (const auto& l : ind) {
        for (int end : {rep_of(l.a), rep_of(l.b)})
            if (end != 0 && lidx[static_cast<std::size_t>(end)] < 0)
                lidx[static_cast<std::size_t>(end)] = nL++;
    }

    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(nL, nL);
    Eigen::VectorXd inj = Eigen::VectorXd::Zero(nL);
    for (const auto& l : ind) {
        const int ra = rep_of(l.a), rb = rep_of(l.b);
        if (ra == rb) continue;
        const double w = 1.0 / l.L;
        const int ia = ra != 0 ? lidx[static_cast<std::size_t>(ra)] : -1;
        const int ib = rb != 0 ? lidx[static_cast<std::size_t>(rb)] : -1;
        if (ia >= 0) lap(ia, ia) += w;
        if (ib >= 0) lap(ib, ib) += w;
        if (ia >= 0 && ib >= 0) { lap(ia, ib) -= w; lap(ib, ia) -= w; }
    }
    {
        int s = 0;
        for (const auto& sid : nl.source_ids()) {
            const auto& cs = std::get<CurrentSource>(nl.element(sid).body);
            const int rf = rep_of(cs.node_from), rt = rep_of(cs.node_to);
            if (rf == rt) { ++s; continue; }
            for (auto [node, sgn] : {std::pair{rt, 1.0}, std::pair{rf, -1.0}}) {
                if (node == 0) continue;
                if (lidx[static_cast<std::size_t>(node)] < 0) {
                    if (u(s) != 0.0)
                        throw AssemblyError("source '" + sid +
                                            "' injects into a node with no inductive path");
                } else {
                    inj(lidx[static_cast<std::size_t>(node)]) += sgn * u(s);
                }
            }
            ++s;
        }
    }

    Eigen::VectorXd phi = Eigen::VectorXd::Zero(nL);
    if (nL > 0) {
        phi = lap.completeOrthogonalDecomposition().solve(inj);
        const double scale = std::max(inj.cwiseAbs().maxCoeff(), 1e-30);
        if ((lap * phi - inj).cwiseAbs().maxCoeff() > 1e-9 * scale)
            throw AssemblyError("source injects into a floating inductive island");
    }

    Eigen::VectorXd out(static_cast<Eigen::Index>(ind.size()));
    for (std::size_t k = 0; k < ind.size(); ++k) {
        const auto& l = ind[k];
        const int ra = rep_of(l.a), rb = rep_of(l.b);
        if (ra == rb) {
            out(static_cast<Eigen::Index>(k)) = 0.0;
            continue;
        }
        const double pa = ra != 0 ? phi(lidx[static_cast<std::size_t>(ra)]) : 0.0;
        const double pb = rb != 0 ? phi(lidx[static_cast<std::size_t>(rb)]) : 0.0;
        out(static_cast<Eigen::Index>(k)) = (pa - pb) / l.L;
    }
    return out;
}

} // namespace cryospike
