#include "hygro/wall.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hygro/errors.hpp"
#include "hygro/tridiag.hpp"

namespace hygro {

Grid1D Grid1D::with_nodes(int n) {
    if (n < 3) throw std::invalid_argument("Grid1D: need at least 3 nodes");
    return Grid1D{n, 1.0 / (n - 1)};
}

Grid1D Grid1D::with_spacing(double dx) {
    if (!(dx > 0.0 && dx < 0.5)) throw std::invalid_argument("Grid1D: bad spacing");
    const int n = static_cast<int>(std::lround(1.0 / dx)) + 1;
    return with_nodes(n);
}

WallField WallField::uniform(const Grid1D& grid, double u0, double v0) {
    WallField f;
    f.u_prev.assign(grid.n, u0);
    f.u_curr.assign(grid.n, u0);
    f.v_prev.assign(grid.n, v0);
    f.v_curr.assign(grid.n, v0);
    return f;
}

CoefficientModel CoefficientModel::material(MaterialModel m, const ScalingContext& ctx,
                                            CoefficientSet reference) {
    CoefficientModel c;
    c.constant_ = false;
    c.model_ = std::move(m);
    c.ctx_ = ctx;
    c.reference_ = reference;
    return c;
}

namespace {
CoefficientSet divide(const CoefficientSet& a, const CoefficientSet& b) {
    return CoefficientSet{a.c_M / b.c_M,   a.k_M / b.k_M,   a.c_TT / b.c_TT,
                          a.k_TT / b.k_TT, a.c_TM / b.c_TM, a.k_TM / b.k_TM};
}
}  // namespace

CoefficientSet CoefficientModel::star(double u, double v) const {
    if (constant_) return CoefficientSet{};
    return divide(model_.evaluate(u * ctx_.T_i, v * ctx_.P_vi), reference_);
}

CoefficientSet CoefficientModel::star_clamped(double u, double v) const {
    if (constant_) return CoefficientSet{};
    return divide(model_.evaluate_clamped(u * ctx_.T_i, v * ctx_.P_vi), reference_);
}

std::vector<double> df_step_linear(const std::vector<double>& prev,
                                   const std::vector<double>& curr, double lambda) {
    const std::size_t n = curr.size();
    std::vector<double> next(n);
    next[0] = curr[0];
    next[n - 1] = curr[n - 1];
    const double a0 = (1.0 - lambda) / (1.0 + lambda);
    const double a1 = lambda / (1.0 + lambda);
    for (std::size_t j = 1; j + 1 < n; ++j)
        next[j] = a0 * prev[j] + a1 * (curr[j + 1] + curr[j - 1]);
    return next;
}

namespace {

struct Face {
    int jb, jn;            // boundary node, interior neighbour
    const FaceValues* bc;
};

void rotate(std::vector<double>& prev, std::vector<double>& curr, std::vector<double>& next) {
    prev.swap(curr);
    curr.swap(next);
}

// Starred coefficient tables for layer n. Constant models skip evaluation
// entirely and read a shared unit set; material models evaluate at every
// node and half node (midpoint state average). strict = true annotates
// domain errors with the node index.
struct StarTables {
    bool unit = false;
    std::vector<CoefficientSet> node, half;

    static const CoefficientSet kUnit;

    StarTables(const CoefficientModel& coeffs, const std::vector<double>& u,
               const std::vector<double>& v, bool strict) {
        if (coeffs.is_constant()) {
            unit = true;
            return;
        }
        const std::size_t n = u.size();
        node.resize(n);
        half.resize(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (strict) {
                try {
                    node[j] = coeffs.star(u[j], v[j]);
                } catch (const domain_error& e) {
                    std::ostringstream os;
                    os << e.what() << " [node " << j << "]";
                    throw domain_error(os.str());
                }
            } else {
                node[j] = coeffs.star_clamped(u[j], v[j]);
            }
        }
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double um = 0.5 * (u[j] + u[j + 1]);
            const double vm = 0.5 * (v[j] + v[j + 1]);
            if (strict) {
                try {
                    half[j] = coeffs.star(um, vm);
                } catch (const domain_error& e) {
                    std::ostringstream os;
                    os << e.what() << " [half node " << j << "+1/2]";
                    throw domain_error(os.str());
                }
            } else {
                half[j] = coeffs.star_clamped(um, vm);
            }
        }
    }

    const CoefficientSet& at_node(int j) const { return unit ? kUnit : node[j]; }
    const CoefficientSet& at_half(int j) const { return unit ? kUnit : half[j]; }
    const CoefficientSet& half_front() const { return unit ? kUnit : half.front(); }
    const CoefficientSet& half_back() const { return unit ? kUnit : half.back(); }
};

const CoefficientSet StarTables::kUnit{};

}  // namespace

void df_step_coupled(WallField& f, const Grid1D& grid, const WallGroups& p,
                     const FaceValues& left, const FaceValues& right, double dt) {
    const int n = grid.n;
    const double dx = grid.dx;
    const double lam = 2.0 * p.Fo_M * dt / (dx * dx);
    const double mu = 2.0 * p.Fo_TT * dt / (dx * dx);
    const double beta = 2.0 * p.Fo_TM * p.gamma * dt / (dx * dx);
    const double ratio = p.Fo_TT != 0.0 ? p.Fo_TM * p.gamma / p.Fo_TT : 0.0;

    std::vector<double> vn(n), un(n);
    const auto& vp = f.v_prev;
    const auto& vc = f.v_curr;
    const auto& up = f.u_prev;
    const auto& uc = f.u_curr;

    for (int j = 1; j + 1 < n; ++j)
        vn[j] = ((1.0 - lam) * vp[j] + lam * (vc[j + 1] + vc[j - 1])) / (1.0 + lam);

    const Face faces[2] = {{0, 1, &left}, {n - 1, n - 2, &right}};
    for (const Face& fc : faces) {
        const FaceValues& b = *fc.bc;
        const double cpl = lam * dx * b.Bi_M;
        vn[fc.jb] = ((1.0 - lam - cpl) * vp[fc.jb] + 2.0 * lam * vc[fc.jn] +
                     2.0 * lam * dx * (b.Bi_M * b.v_inf + b.g_inf)) /
                    (1.0 + lam + cpl);
    }

    for (int j = 1; j + 1 < n; ++j) {
        un[j] = ((1.0 - mu) * up[j] + mu * (uc[j + 1] + uc[j - 1]) +
                 (p.gamma - beta) * vp[j] + beta * (vc[j + 1] + vc[j - 1]) -
                 (p.gamma + beta) * vn[j]) /
                (1.0 + mu);
    }
    for (const Face& fc : faces) {
        const FaceValues& b = *fc.bc;
        const double vbar = 0.5 * (vn[fc.jb] + vp[fc.jb]);
        const double vg = vc[fc.jn] - 2.0 * dx * (b.Bi_M * (vbar - b.v_inf) - b.g_inf);
        const double cplu = mu * dx * b.Bi_TT;
        un[fc.jb] = ((1.0 - mu - cplu) * up[fc.jb] + 2.0 * mu * uc[fc.jn] +
                     mu * ratio * (vc[fc.jn] - vg) +
                     2.0 * mu * dx *
                         (b.Bi_TT * b.u_inf - b.Bi_TM * (vbar - b.v_inf) + b.q_inf) +
                     (p.gamma - beta) * vp[fc.jb] + beta * (vc[fc.jn] + vg) -
                     (p.gamma + beta) * vn[fc.jb]) /
                    (1.0 + mu + cplu);
    }

    rotate(f.v_prev, f.v_curr, vn);
    rotate(f.u_prev, f.u_curr, un);
    f.t_star += dt;
}

void df_step_nonlinear(WallField& f, const Grid1D& grid, const WallGroups& p,
                       const CoefficientModel& coeffs, const FaceValues& left,
                       const FaceValues& right, double dt) {
    const int n = grid.n;
    const double dx = grid.dx;
    const double a = p.Fo_M * dt / (dx * dx);
    const double b_ = p.Fo_TT * dt / (dx * dx);
    const double g_ = p.Fo_TM * p.gamma * dt / (dx * dx);
    const double ratio = p.Fo_TT != 0.0 ? p.Fo_TM * p.gamma / p.Fo_TT : 0.0;

    const StarTables s(coeffs, f.u_curr, f.v_curr, /*strict=*/true);
    std::vector<double> vn(n), un(n);
    const auto& vp = f.v_prev;
    const auto& vc = f.v_curr;
    const auto& up = f.u_prev;
    const auto& uc = f.u_curr;

    for (int j = 1; j + 1 < n; ++j) {
        const double kp = s.at_half(j).k_M, km = s.at_half(j - 1).k_M, cm = s.at_node(j).c_M;
        vn[j] = ((cm - a * (kp + km)) * vp[j] + 2.0 * a * (kp * vc[j + 1] + km * vc[j - 1])) /
                (cm + a * (kp + km));
    }
    const Face faces[2] = {{0, 1, &left}, {n - 1, n - 2, &right}};
    for (const Face& fc : faces) {
        const FaceValues& b = *fc.bc;
        const double km_b = s.at_node(fc.jb).k_M;  // ghost-side transport coefficient
        const double kp_b = (fc.jb == 0 ? s.half_front() : s.half_back()).k_M;
        const double cm = s.at_node(fc.jb).c_M;
        const double cpl = 2.0 * a * dx * b.Bi_M;
        vn[fc.jb] = ((cm - a * (kp_b + km_b) - cpl) * vp[fc.jb] +
                     2.0 * a * (kp_b + km_b) * vc[fc.jn] +
                     4.0 * a * dx * (b.Bi_M * b.v_inf + b.g_inf)) /
                    (cm + a * (kp_b + km_b) + cpl);
    }

    for (int j = 1; j + 1 < n; ++j) {
        const double ktp = s.at_half(j).k_TT, ktm = s.at_half(j - 1).k_TT;
        const double kmp = s.at_half(j).k_TM, kmm = s.at_half(j - 1).k_TM;
        const double ctt = s.at_node(j).c_TT, ctm = s.at_node(j).c_TM;
        un[j] = ((ctt - b_ * (ktp + ktm)) * up[j] - p.gamma * ctm * (vn[j] - vp[j]) +
                 2.0 * b_ * (ktp * uc[j + 1] + ktm * uc[j - 1]) +
                 2.0 * g_ * (kmp * vc[j + 1] + kmm * vc[j - 1]) -
                 g_ * (kmp + kmm) * (vn[j] + vp[j])) /
                (ctt + b_ * (ktp + ktm));
    }
    for (const Face& fc : faces) {
        const FaceValues& b = *fc.bc;
        const auto& nb = s.at_node(fc.jb);
        const double kt_b = nb.k_TT, kTM_b = nb.k_TM, km_b = nb.k_M;
        const auto& hb = (fc.jb == 0 ? s.half_front() : s.half_back());
        const double ktp_b = hb.k_TT, kmp_b = hb.k_TM;
        const double vbar = 0.5 * (vn[fc.jb] + vp[fc.jb]);
        const double vg =
            vc[fc.jn] - (2.0 * dx / km_b) * (b.Bi_M * (vbar - b.v_inf) - b.g_inf);
        const double cplu = 2.0 * b_ * dx * b.Bi_TT;
        un[fc.jb] = ((nb.c_TT - b_ * (ktp_b + kt_b) - cplu) * up[fc.jb] -
                     p.gamma * nb.c_TM * (vn[fc.jb] - vp[fc.jb]) +
                     2.0 * b_ * (ktp_b + kt_b) * uc[fc.jn] +
                     2.0 * b_ * ratio * kTM_b * (vc[fc.jn] - vg) -
                     4.0 * b_ * dx * (b.Bi_TM * (vbar - b.v_inf) - b.q_inf) +
                     2.0 * cplu * b.u_inf + 2.0 * g_ * (kmp_b * vc[fc.jn] + kTM_b * vg) -
                     g_ * (kmp_b + kTM_b) * (vn[fc.jb] + vp[fc.jb])) /
                    (nb.c_TT + b_ * (ktp_b + kt_b) + cplu);
    }

    rotate(f.v_prev, f.v_curr, vn);
    rotate(f.u_prev, f.u_curr, un);
    f.t_star += dt;
}

void euler_explicit_step(WallField& f, const Grid1D& grid, const WallGroups& p,
                         const CoefficientModel& coeffs, const FaceValues& left,
                         const FaceValues& right, double dt) {
    const int n = grid.n;
    const double dx = grid.dx;
    const StarTables s(coeffs, f.u_curr, f.v_curr, /*strict=*/false);
    const auto& vc = f.v_curr;
    const auto& uc = f.u_curr;
    std::vector<double> vn(n), un(n);

    // ghost values from layer-n boundary states
    double vg[2], ug[2];
    const Face faces[2] = {{0, 1, &left}, {n - 1, n - 2, &right}};
    for (int i = 0; i < 2; ++i) {
        const Face& fc = faces[i];
        const FaceValues& b = *fc.bc;
        const auto& nb = s.at_node(fc.jb);
        vg[i] = vc[fc.jn] - (2.0 * dx / nb.k_M) * (b.Bi_M * (vc[fc.jb] - b.v_inf) - b.g_inf);
        ug[i] = uc[fc.jn] +
                (p.Fo_TM * p.gamma * nb.k_TM) / (p.Fo_TT * nb.k_TT) * (vc[fc.jn] - vg[i]) -
                (2.0 * dx / nb.k_TT) *
                    (b.Bi_TT * (uc[fc.jb] - b.u_inf) + b.Bi_TM * (vc[fc.jb] - b.v_inf) - b.q_inf);
    }

    const double rdt = dt / (dx * dx);
    for (int j = 0; j < n; ++j) {
        const double vL = j == 0 ? vg[0] : vc[j - 1];
        const double vR = j == n - 1 ? vg[1] : vc[j + 1];
        const double uL = j == 0 ? ug[0] : uc[j - 1];
        const double uR = j == n - 1 ? ug[1] : uc[j + 1];
        // ghost-side half-node coefficients collapse onto the boundary node
        const double km = j == 0 ? s.at_node(0).k_M : s.at_half(j - 1).k_M;
        const double kp = j == n - 1 ? s.at_node(n - 1).k_M : s.at_half(j).k_M;
        const double ktm = j == 0 ? s.at_node(0).k_TT : s.at_half(j - 1).k_TT;
        const double ktp = j == n - 1 ? s.at_node(n - 1).k_TT : s.at_half(j).k_TT;
        const double kmm = j == 0 ? s.at_node(0).k_TM : s.at_half(j - 1).k_TM;
        const double kmp = j == n - 1 ? s.at_node(n - 1).k_TM : s.at_half(j).k_TM;

        const double div_v = kp * (vR - vc[j]) - km * (vc[j] - vL);
        vn[j] = vc[j] + rdt * p.Fo_M * div_v / s.at_node(j).c_M;
        const double div_u = ktp * (uR - uc[j]) - ktm * (uc[j] - uL);
        const double div_vm = kmp * (vR - vc[j]) - kmm * (vc[j] - vL);
        un[j] = uc[j] +
                (rdt * (p.Fo_TT * div_u + p.Fo_TM * p.gamma * div_vm) -
                 p.gamma * s.at_node(j).c_TM * (vn[j] - vc[j])) /
                s.at_node(j).c_TT;
    }

    rotate(f.v_prev, f.v_curr, vn);
    rotate(f.u_prev, f.u_curr, un);
    f.t_star += dt;
}

namespace {

// Prefactored Thomas elimination: division-free substitution per solve.
struct FactoredTridiag {
    std::vector<double> m, inv, up;

    void factor(const std::vector<double>& lo, const std::vector<double>& di,
                const std::vector<double>& upper) {
        const std::size_t n = di.size();
        m.assign(n, 0.0);
        inv.assign(n, 0.0);
        up = upper;
        double dp = di[0];
        inv[0] = 1.0 / dp;
        for (std::size_t i = 1; i < n; ++i) {
            m[i] = lo[i] * inv[i - 1];
            dp = di[i] - m[i] * up[i - 1];
            inv[i] = 1.0 / dp;
        }
    }

    void solve(std::vector<double>& x) const {  // x holds rhs on entry
        const std::size_t n = m.size();
        for (std::size_t i = 1; i < n; ++i) x[i] -= m[i] * x[i - 1];
        x[n - 1] *= inv[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - up[i] * x[i + 1]) * inv[i];
    }
};

// Constant-coefficient walls rebuild identical matrices every step; cache the
// factorizations keyed by the quantities the matrices depend on.
struct FactorCache {
    struct Key {
        int n = 0;
        double r = 0, rb = 0, biM0 = 0, biM1 = 0, biTT0 = 0, biTT1 = 0;
        bool operator==(const Key&) const = default;
    };
    Key key;
    FactoredTridiag v, u;
};

FactorCache& cached_factors(const FactorCache::Key& key, double dx) {
    static thread_local std::vector<FactorCache> cache;
    for (auto& e : cache)
        if (e.key == key) return e;
    if (cache.size() > 32) cache.clear();
    cache.emplace_back();
    FactorCache& e = cache.back();
    e.key = key;
    const int n = key.n;
    std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0);
    // moisture matrix with unit coefficients
    for (int j = 1; j + 1 < n; ++j) {
        lo[j] = -key.r;
        di[j] = 1.0 + 2.0 * key.r;
        up[j] = -key.r;
    }
    di[0] = 1.0 + 2.0 * key.r + 2.0 * key.r * dx * key.biM0;
    up[0] = -2.0 * key.r;
    di[n - 1] = 1.0 + 2.0 * key.r + 2.0 * key.r * dx * key.biM1;
    lo[n - 1] = -2.0 * key.r;
    e.v.factor(lo, di, up);
    // energy matrix with unit coefficients
    for (int j = 1; j + 1 < n; ++j) {
        lo[j] = -key.rb;
        di[j] = 1.0 + 2.0 * key.rb;
        up[j] = -key.rb;
    }
    di[0] = 1.0 + 2.0 * key.rb + 2.0 * key.rb * dx * key.biTT0;
    up[0] = -2.0 * key.rb;
    lo[0] = 0.0;
    di[n - 1] = 1.0 + 2.0 * key.rb + 2.0 * key.rb * dx * key.biTT1;
    lo[n - 1] = -2.0 * key.rb;
    up[n - 1] = 0.0;
    e.u.factor(lo, di, up);
    return e;
}

// Substitution-only pass for constant-coefficient walls.
void implicit_wall_pass_unit(const WallField& base, const Grid1D& grid, const WallGroups& p,
                             const FaceValues& left, const FaceValues& right, double dt,
                             std::vector<double>& out_u, std::vector<double>& out_v) {
    const int n = grid.n;
    const double dx = grid.dx;
    const double r = p.Fo_M * dt / (dx * dx);
    const double rb = p.Fo_TT * dt / (dx * dx);
    const double rg = p.Fo_TM * p.gamma * dt / (dx * dx);
    const FactorCache& fc = cached_factors(
        FactorCache::Key{n, r, rb, left.Bi_M, right.Bi_M, left.Bi_TT, right.Bi_TT}, dx);

    out_v = base.v_curr;
    out_v[0] += 2.0 * r * dx * (left.Bi_M * left.v_inf + left.g_inf);
    out_v[n - 1] += 2.0 * r * dx * (right.Bi_M * right.v_inf + right.g_inf);
    fc.v.solve(out_v);
    const std::vector<double>& vN = out_v;

    out_u.resize(n);
    for (int j = 1; j + 1 < n; ++j) {
        out_u[j] = base.u_curr[j] - p.gamma * (vN[j] - base.v_curr[j]) +
                   rg * (vN[j + 1] - 2.0 * vN[j] + vN[j - 1]);
    }
    out_u[0] = base.u_curr[0] - p.gamma * (vN[0] - base.v_curr[0]) +
               2.0 * rg * (vN[1] - vN[0]) +
               2.0 * rb * dx * (left.Bi_TT * left.u_inf -
                                left.Bi_TM * (vN[0] - left.v_inf) + left.q_inf);
    out_u[n - 1] = base.u_curr[n - 1] - p.gamma * (vN[n - 1] - base.v_curr[n - 1]) +
                   2.0 * rg * (vN[n - 2] - vN[n - 1]) +
                   2.0 * rb * dx * (right.Bi_TT * right.u_inf -
                                    right.Bi_TM * (vN[n - 1] - right.v_inf) + right.q_inf);
    fc.u.solve(out_u);
}

}  // namespace

void implicit_wall_pass(const WallField& base, const Grid1D& grid, const WallGroups& p,
                        const CoefficientModel& coeffs, const FaceValues& left,
                        const FaceValues& right, double dt,
                        const std::vector<double>& iter_u, const std::vector<double>& iter_v,
                        std::vector<double>& out_u, std::vector<double>& out_v) {
    if (coeffs.is_constant()) {
        implicit_wall_pass_unit(base, grid, p, left, right, dt, out_u, out_v);
        return;
    }
    const int n = grid.n;
    const double dx = grid.dx;
    const double r = p.Fo_M * dt / (dx * dx);
    const double rb = p.Fo_TT * dt / (dx * dx);
    const double rg = p.Fo_TM * p.gamma * dt / (dx * dx);

    const StarTables s(coeffs, iter_u, iter_v, /*strict=*/false);
    // reused scratch; the pass is the inner loop of every implicit march
    static thread_local std::vector<double> lo, di, up_, rhs;
    lo.assign(n, 0.0);
    di.assign(n, 0.0);
    up_.assign(n, 0.0);
    rhs.assign(n, 0.0);
    const Face faces[2] = {{0, 1, &left}, {n - 1, n - 2, &right}};

    // moisture system
    for (int j = 1; j + 1 < n; ++j) {
        const double kp = s.at_half(j).k_M, km = s.at_half(j - 1).k_M;
        lo[j] = -r * km;
        di[j] = s.at_node(j).c_M + r * (kp + km);
        up_[j] = -r * kp;
        rhs[j] = s.at_node(j).c_M * base.v_curr[j];
    }
    for (const Face& fc : faces) {
        const FaceValues& b = *fc.bc;
        const double km_b = s.at_node(fc.jb).k_M;
        const double kp_b = (fc.jb == 0 ? s.half_front() : s.half_back()).k_M;
        di[fc.jb] = s.at_node(fc.jb).c_M + r * (kp_b + km_b) + 2.0 * r * dx * b.Bi_M;
        const double off = -r * (kp_b + km_b);
        if (fc.jb == 0)
            up_[0] = off;
        else
            lo[n - 1] = off;
        rhs[fc.jb] = s.at_node(fc.jb).c_M * base.v_curr[fc.jb] +
                     2.0 * r * dx * (b.Bi_M * b.v_inf + b.g_inf);
    }
    out_v = rhs;
    solve_tridiagonal(lo, di, up_, out_v);  // diag is rebuilt below
    const std::vector<double>& vN = out_v;

    // energy system, with the new moisture layer as data
    for (int j = 1; j + 1 < n; ++j) {
        const double ktp = s.at_half(j).k_TT, ktm = s.at_half(j - 1).k_TT;
        const double kmp = s.at_half(j).k_TM, kmm = s.at_half(j - 1).k_TM;
        lo[j] = -rb * ktm;
        di[j] = s.at_node(j).c_TT + rb * (ktp + ktm);
        up_[j] = -rb * ktp;
        rhs[j] = s.at_node(j).c_TT * base.u_curr[j] -
                 p.gamma * s.at_node(j).c_TM * (vN[j] - base.v_curr[j]) +
                 rg * (kmp * (vN[j + 1] - vN[j]) - kmm * (vN[j] - vN[j - 1]));
    }
    for (const Face& fc : faces) {
        const FaceValues& b = *fc.bc;
        const auto& nb = s.at_node(fc.jb);
        const double kt_b = nb.k_TT, kTM_b = nb.k_TM;
        const auto& hb = (fc.jb == 0 ? s.half_front() : s.half_back());
        di[fc.jb] = nb.c_TT + rb * (hb.k_TT + kt_b) + 2.0 * rb * dx * b.Bi_TT;
        const double off = -rb * (hb.k_TT + kt_b);
        if (fc.jb == 0)
            up_[0] = off;
        else
            lo[n - 1] = off;
        // the moisture ghost cancels between the flux and the closure
        rhs[fc.jb] = nb.c_TT * base.u_curr[fc.jb] -
                     p.gamma * nb.c_TM * (vN[fc.jb] - base.v_curr[fc.jb]) +
                     rg * (hb.k_TM + kTM_b) * (vN[fc.jn] - vN[fc.jb]) +
                     2.0 * rb * dx *
                         (b.Bi_TT * b.u_inf - b.Bi_TM * (vN[fc.jb] - b.v_inf) + b.q_inf);
    }
    out_u = rhs;
    solve_tridiagonal(lo, di, up_, out_u);
}

int euler_implicit_step(WallField& f, const Grid1D& grid, const WallGroups& p,
                        const CoefficientModel& coeffs, const FaceValues& left,
                        const FaceValues& right, double dt, double eta,
                        int max_subiters) {
    if (!(eta > 0.0)) throw std::invalid_argument("euler_implicit_step: eta must be positive");
    const int n = grid.n;
    std::vector<double> ui = f.u_curr, vi = f.v_curr;  // current iterate (layer n+1 guess)
    std::vector<double> uN, vN;

    int pass = 0;
    while (true) {
        ++pass;
        implicit_wall_pass(f, grid, p, coeffs, left, right, dt, ui, vi, uN, vN);
        double diff = 0.0;
        for (int j = 0; j < n; ++j) {
            diff = std::max(diff, std::abs(uN[j] - ui[j]));
            diff = std::max(diff, std::abs(vN[j] - vi[j]));
        }
        ui.swap(uN);
        vi.swap(vN);

        if (coeffs.is_constant()) break;  // single solve is exact
        if (diff < eta) break;
        if (pass >= max_subiters) {
            std::ostringstream os;
            os << "implicit wall step did not converge in " << max_subiters
               << " sub-iterations (residual " << diff << ")";
            throw convergence_error(os.str(), diff);
        }
    }

    rotate(f.v_prev, f.v_curr, vi);
    rotate(f.u_prev, f.u_curr, ui);
    f.t_star += dt;
    return pass;
}

void bootstrap_first_layer(WallField& f, const Grid1D& grid, const WallGroups& p,
                           const CoefficientModel& coeffs, const FaceValues& left,
                           const FaceValues& right, double dt, double eta,
                           int max_subiters) {
    euler_implicit_step(f, grid, p, coeffs, left, right, dt, eta, max_subiters);
}

CflBounds cfl_limit(const CoefficientModel& coeffs, const WallGroups& p, double dx,
                    const std::vector<std::pair<double, double>>& state_samples) {
    if (state_samples.empty())
        throw std::invalid_argument("cfl_limit: state sample set must not be empty");
    double heat = std::numeric_limits<double>::infinity();
    double moist = std::numeric_limits<double>::infinity();
    for (const auto& [u, v] : state_samples) {
        const CoefficientSet s = coeffs.star_clamped(u, v);
        double h = s.c_TT / (p.Fo_TT * s.k_TT);
        if (p.gamma > 0.0) {
            h = std::min(h, s.c_TT / (p.gamma * p.Fo_TM * s.k_TM));
            h = std::min(h, s.c_TT * s.c_M / (s.c_TM * p.gamma * p.Fo_M * s.k_M));
        }
        heat = std::min(heat, h);
        moist = std::min(moist, s.c_M / (p.Fo_M * s.k_M));
    }
    const double half_dx2 = 0.5 * dx * dx;
    return CflBounds{half_dx2 * heat, half_dx2 * moist};
}

double max_abs_field(const WallField& f) {
    double m = 0.0;
    for (double x : f.u_curr) m = std::max(m, std::abs(x));
    for (double x : f.v_curr) m = std::max(m, std::abs(x));
    if (std::any_of(f.u_curr.begin(), f.u_curr.end(), [](double x) { return !std::isfinite(x); }) ||
        std::any_of(f.v_curr.begin(), f.v_curr.end(), [](double x) { return !std::isfinite(x); }))
        return std::numeric_limits<double>::infinity();
    return m;
}

}  // namespace hygro
