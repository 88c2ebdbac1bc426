#pragma once

#include "gptlab/conductivity.hpp"
#include "gptlab/ntd.hpp"
#include "gptlab/radial_ode.hpp"

namespace gptlab {

/// Coefficients (a_n^c, a_n^s) of a harmonic background
/// h = sum_n r^n (a_n^c cos + a_n^s sin)(n theta).
struct HarmonicCoeffs {
    Eigen::VectorXd cos_a, sin_a;

    explicit HarmonicCoeffs(int max_order)
        : cos_a(Eigen::VectorXd::Zero(max_order)), sin_a(Eigen::VectorXd::Zero(max_order)) {}
    static HarmonicCoeffs single(int n, Parity parity, int max_order, double amplitude = 1.0);

    int max_order() const { return (int)cos_a.size(); }
    double evaluate(double r, double theta) const;
    /// Gradient in polar components (d/dr, (1/r) d/dtheta).
    Eigen::Vector2d gradient_polar(double r, double theta) const;
};

/// The four contracted GPT blocks M^{cc}, M^{cs}, M^{sc}, M^{ss} up to order N.
class ContractedGPTTable {
public:
    ContractedGPTTable(int N)
        : N_(N), cc_(Eigen::MatrixXd::Zero(N, N)), cs_(Eigen::MatrixXd::Zero(N, N)),
          sc_(Eigen::MatrixXd::Zero(N, N)), ss_(Eigen::MatrixXd::Zero(N, N)) {}
    static ContractedGPTTable from_assembled(const Eigen::MatrixXd& m);

    int max_order() const { return N_; }
    // receiver index m, source index n, both 1-based
    double cc(int m, int n) const { return cc_(m - 1, n - 1); }
    double cs(int m, int n) const { return cs_(m - 1, n - 1); }
    double sc(int m, int n) const { return sc_(m - 1, n - 1); }
    double ss(int m, int n) const { return ss_(m - 1, n - 1); }
    Eigen::MatrixXd& block_cc() { return cc_; }
    Eigen::MatrixXd& block_cs() { return cs_; }
    Eigen::MatrixXd& block_sc() { return sc_; }
    Eigen::MatrixXd& block_ss() { return ss_; }
    const Eigen::MatrixXd& block_cc() const { return cc_; }
    const Eigen::MatrixXd& block_cs() const { return cs_; }
    const Eigen::MatrixXd& block_sc() const { return sc_; }
    const Eigen::MatrixXd& block_ss() const { return ss_; }

    /// [[cc, cs], [sc, ss]] as one 2N x 2N matrix.
    Eigen::MatrixXd assembled() const;
    double norm() const { return assembled().norm(); }
    /// Quadratic form sum a_alpha a_beta M_alpha_beta for harmonic coefficients.
    double quadratic_form(const HarmonicCoeffs& h) const;

private:
    int N_;
    Eigen::MatrixXd cc_, cs_, sc_, ss_;
};

struct FirstOrderPT {
    Eigen::Matrix2d M;
};

/// Free-space transmission state for a single background mode: the interior
/// part is psi * f(r) * cos/sin(n theta) with f the unit-flux mode solution.
struct RadialTransmissionState {
    int order;
    double psi;       // Neumann datum coefficient (Lam_s - Lam_e)^-1 (Lam_1 - Lam_e)[dh/dnu]
    double lambda;    // NtD diagonal entry
    RadialModeSolution sol;
};

RadialTransmissionState radial_transmission_state(const ConductivityField& sigma, int n, double R,
                                                  const RadialSolveOptions& opts = {});

ContractedGPTTable contracted_gpts(const ConductivityField& sigma, int N, double R,
                                   const RadialSolveOptions& radial_opts = {},
                                   const FemOptions& fem_opts = {});
/// Table from an already-built Lambda_sigma.
ContractedGPTTable contracted_gpts(const NtDOperator& lambda_sigma);

/// Closed form 2 pi n R^{2n} (k-1)/(k+1) for the homogeneous disk.
double gpt_homogeneous_disk(double k, double R, int n);

struct FarFieldValue {
    double value;
    double tail_estimate;  // magnitude of the last retained order
};

FarFieldValue far_field_eval(const ContractedGPTTable& table, const HarmonicCoeffs& h, double x,
                             double y, double R);
FarFieldValue far_field_eval(const ConductivityField& sigma, const HarmonicCoeffs& h, double x,
                             double y, double R, int N = 16,
                             const RadialSolveOptions& opts = {});

/// Volume identity sum a b M = int (sigma - 1) grad u1 . grad h2, with u1 the
/// full transmission solution for background h1.  Independent of the
/// operator-composition route up to quadrature error.
double gpt_volume_identity(const ConductivityField& sigma, const HarmonicCoeffs& h1,
                           const HarmonicCoeffs& h2, double R,
                           const RadialSolveOptions& opts = {},
                           const FemOptions& fem_opts = {});

/// Boundary-integral route int h1 sigma du2/dnu - int dh1/dnu u2 over the
/// circle (cosine parities, as used in the reconstruction loop).
double gpt_boundary_formula(const ConductivityField& sigma, int m, int n, double R,
                            const RadialSolveOptions& opts = {}, const FemOptions& fem_opts = {});

/// Lower/upper bounds int (sigma-1)/sigma |grad h|^2 and int (sigma-1)|grad h|^2.
std::pair<double, double> positivity_bounds(const ConductivityField& sigma,
                                            const HarmonicCoeffs& h, double R);

FirstOrderPT first_order_pt(const ContractedGPTTable& table);

}  // namespace gptlab
