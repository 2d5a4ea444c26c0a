#ifndef DIFFTOMO_HELMHOLTZ_HPP
#define DIFFTOMO_HELMHOLTZ_HPP

#include <memory>
#include <variant>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "difftomo/acquisition.hpp"
#include "difftomo/field.hpp"
#include "difftomo/phantom.hpp"

namespace dt
{
    // Frequency-domain finite-difference Helmholtz operator -Delta - k(x)^2
    // with the first-order Robin absorbing condition -i k u + du/dn = 0 on
    // the boundary. Interior rows use the 5-point stencil; boundary rows use
    // one-sided first-order differences (each boundary face of a node
    // contributes (u_C - u_in)/h - i k u_C).
    class MediumOperator
    {
    public:
        using SpMat = Eigen::SparseMatrix<cplx>;
        using Vec = Eigen::VectorXcd;

        MediumOperator(RealField wavenumber, double omega);

        const Grid& grid() const { return k_.grid; }
        const RealField& wavenumber() const { return k_; }
        double omega() const { return omega_; }
        const SpMat& matrix() const { return matrix_; }

        // points per wavelength at the largest local wavenumber
        double points_per_wavelength() const;
        bool resolution_warning() const { return warn_; }

        Vec solve(const Vec& rhs) const;          // relative residual <= 1e-8
        Vec solve_adjoint(const Vec& rhs) const;  // solves A^H x = b

    private:
        void factorize() const;

        RealField k_;
        double omega_;
        bool warn_ = false;
        SpMat matrix_;
        mutable std::shared_ptr<Eigen::SparseLU<SpMat>> lu_;
    };

    // Throws when k <= 0 anywhere or fewer than 5 points per wavelength;
    // sets the warning flag below 10.
    MediumOperator assemble(const RealField& wavenumber, double omega);

    // Operator for a homogeneous background k0 on `grid`.
    MediumOperator assemble_homogeneous(const Grid& grid, double k0);

    // Right-hand sides. Plane-wave contrast: f(x) e^{i k0 x2}. Point/line:
    // discrete deltas 1/h^2 at the nearest node per position.
    Eigen::VectorXcd rhs_plane_wave_contrast(const RealField& f, double k0);
    Eigen::VectorXcd rhs_for(const SourceSpec& source, const Grid& grid);

    ComplexField plane_wave(const Grid& grid, double k0);  // e^{i k0 x2}

    // alpha * (u_tot - u_inc); grids must match.
    ComplexField scattered_from_total(const ComplexField& u_tot,
                                      const ComplexField& u_inc, cplx alpha);

    // Least-squares scalar mapping the incident trace onto the ideal
    // plane-wave value e^{i k0 r_M}, fitted on the central half of the line.
    cplx calibrate_incident(const Trace& u_inc_trace, double k0);

    // Bilinear interpolation at (x1, r_M); receivers must lie in the grid.
    Trace sample_receivers(const ComplexField& field,
                           const std::vector<double>& receiver_x, double r_M);

    // Input medium for data generation: a scene (rotated analytically per
    // angle) or a sampled potential (rotated by bilinear resampling).
    using ForwardMedium = std::variant<SceneSpec, RealField>;

    struct ForwardResult
    {
        Dataset total;
        Dataset scattered;   // calibrated for point/line sources
        Dataset incident;
    };

    struct ForwardOptions
    {
        Grid grid;                      // solver grid
        bool rotate_acquisition = false; // rotate sources/receivers instead
    };

    ForwardResult forward_dataset(const ForwardMedium& medium,
                                  const AcquisitionConfig& acq,
                                  const ForwardOptions& opts);
}

#endif
