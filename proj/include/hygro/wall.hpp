#pragma once
#include <functional>
#include <utility>
#include <vector>

#include "hygro/materials.hpp"
#include "hygro/scaling.hpp"

namespace hygro {

// Uniform grid on x* in [0, 1]; n nodes including both boundary nodes.
struct Grid1D {
    int n = 0;
    double dx = 0.0;

    static Grid1D with_nodes(int n);
    static Grid1D with_spacing(double dx);  // n = round(1/dx) + 1
    double x(int j) const { return j * dx; }
};

// Two retained time layers of the dimensionless fields on the grid.
// u = T/T_i, v = P_v/P_vi. curr is layer n, prev is layer n-1.
struct WallField {
    std::vector<double> u_prev, u_curr, v_prev, v_curr;
    double t_star = 0.0;

    static WallField uniform(const Grid1D& grid, double u0 = 1.0, double v0 = 1.0);
    int nodes() const { return static_cast<int>(u_curr.size()); }
};

// Resolved boundary data of one face for a single step.
struct FaceValues {
    double Bi_M = 0.0, Bi_TT = 0.0, Bi_TM = 0.0;
    double u_inf = 1.0, v_inf = 1.0;  // ambient dimensionless values
    double g_inf = 0.0, q_inf = 0.0;  // imposed dimensionless fluxes
};

// Normalized (starred) coefficient functions of the dimensionless state.
// Constant models return unity; material-backed models evaluate the
// correlations at (u*T_i, v*P_vi) and divide by the reference set.
class CoefficientModel {
public:
    CoefficientModel() = default;  // constant model, all six == 1

    static CoefficientModel constant() { return CoefficientModel(); }
    static CoefficientModel material(MaterialModel m, const ScalingContext& ctx,
                                     CoefficientSet reference);

    bool is_constant() const { return constant_; }

    // Starred set at (u, v); strict variant throws outside the admissible box.
    CoefficientSet star(double u, double v) const;
    CoefficientSet star_clamped(double u, double v) const;

private:
    bool constant_ = true;
    MaterialModel model_;
    ScalingContext ctx_;
    CoefficientSet reference_;
};

enum class Scheme { DufortFrankel, EulerImplicit, EulerExplicit };

struct SchemeSettings {
    Scheme kind = Scheme::DufortFrankel;
    double eta = 1e-5;       // fixed-point tolerance (implicit only)
    int max_subiters = 100;  // fixed-point iteration cap (implicit only)
};

// --- single-field three-layer update, interior nodes only -----------------
// next[j] = (1-lambda)/(1+lambda) prev[j] + lambda/(1+lambda) (curr[j+1]+curr[j-1]),
// boundary nodes copied from curr. lambda = 2 nu dt / dx^2.
std::vector<double> df_step_linear(const std::vector<double>& prev,
                                   const std::vector<double>& curr, double lambda);

// --- coupled three-layer updates -------------------------------------------
// Constant-coefficient step: v advanced first, then u using the new v layer.
// Ghost nodes at both faces are eliminated against the Robin conditions with
// the boundary value taken as the average of layers n-1 and n+1; the
// resulting scalar relation is solved in closed form per boundary node.
void df_step_coupled(WallField& f, const Grid1D& grid, const WallGroups& p,
                     const FaceValues& left, const FaceValues& right, double dt);

// State-dependent coefficients frozen at layer n; transport coefficients
// at half nodes use the midpoint state average. Reduces to df_step_coupled
// when the model is constant. Throws hygro::domain_error (with node index)
// if a coefficient evaluation leaves the admissible box.
void df_step_nonlinear(WallField& f, const Grid1D& grid, const WallGroups& p,
                       const CoefficientModel& coeffs, const FaceValues& left,
                       const FaceValues& right, double dt);

// Forward Euler with the same half-node and ghost-node machinery, all
// spatial terms at layer n. Divergence is observable, not trapped;
// coefficient evaluations are clamped into the admissible box.
void euler_explicit_step(WallField& f, const Grid1D& grid, const WallGroups& p,
                         const CoefficientModel& coeffs, const FaceValues& left,
                         const FaceValues& right, double dt);

// One linearized backward-Euler solve of both fields (v then u) from the
// layer-n base, with coefficients evaluated at the supplied iterate state.
// Building block of the fixed-point loops here and in the building coupler.
void implicit_wall_pass(const WallField& base, const Grid1D& grid, const WallGroups& p,
                        const CoefficientModel& coeffs, const FaceValues& left,
                        const FaceValues& right, double dt,
                        const std::vector<double>& iter_u, const std::vector<double>& iter_v,
                        std::vector<double>& out_u, std::vector<double>& out_v);

// Backward Euler with fixed-point sub-iterations: coefficients are refreshed
// at the current iterate, the two tridiagonal systems are solved v then u,
// and iteration stops when the joint max-norm change drops below eta.
// Returns the number of linear solves performed.
int euler_implicit_step(WallField& f, const Grid1D& grid, const WallGroups& p,
                        const CoefficientModel& coeffs, const FaceValues& left,
                        const FaceValues& right, double dt, double eta,
                        int max_subiters);

// Produces the second starting layer the three-layer stencil needs: one
// backward Euler step from the initial layer. Both layers retained.
void bootstrap_first_layer(WallField& f, const Grid1D& grid, const WallGroups& p,
                           const CoefficientModel& coeffs, const FaceValues& left,
                           const FaceValues& right, double dt, double eta,
                           int max_subiters);

// --- explicit-scheme stability bounds --------------------------------------
struct CflBounds {
    double dt_heat = 0.0;
    double dt_moisture = 0.0;
    double binding() const { return dt_heat < dt_moisture ? dt_heat : dt_moisture; }
};

// Time-step bounds of the classical explicit scheme, minimized over the
// supplied (u, v) state samples:
//   heat:     dx^2/2 min{ c_TT*/(Fo_TT k_TT*), c_TT*/(gamma Fo_TM k_TM*),
//                         c_TT* c_M*/(c_TM* gamma Fo_M k_M*) }
//   moisture: dx^2/2 min{ c_M*/(Fo_M k_M*) }
// Samples outside the admissible box are clamped onto it.
CflBounds cfl_limit(const CoefficientModel& coeffs, const WallGroups& p, double dx,
                    const std::vector<std::pair<double, double>>& state_samples);

double max_abs_field(const WallField& f);

}  // namespace hygro
