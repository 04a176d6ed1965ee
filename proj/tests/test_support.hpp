#pragma once

#include <Eigen/Dense>
#include <vector>

#include "semsched/linear_system.hpp"
#include "semsched/rng.hpp"

namespace semsched::testsupport {

// The two bundled demo systems (one 3-dim, one 2-dim diagonal).
inline LinearSystem demo_system_1() {
    Eigen::MatrixXd a(3, 3), d(3, 3);
    a << -0.04, 0.03, -0.05,
         -0.01, -0.06, 0.05,
          0.2, 0.15, -0.4;
    d << 4.0, 1.0, 3.0,
         1.0, 0.25, 0.75,
         3.0, 0.75, 2.25;
    return make_system(a, d);
}

inline LinearSystem demo_system_2() {
    Eigen::MatrixXd a(2, 2), d(2, 2);
    a << -0.02, 0.0, 0.0, -0.03;
    d << 0.7, 0.2, 0.2, 0.6;
    return make_system(a, d);
}

inline LinearSystem flipped(const LinearSystem& sys) {
    return make_system(-sys.drift, sys.diffusion);
}

inline LinearSystem scalar_system(double drift, double diffusion) {
    Eigen::MatrixXd a(1, 1), d(1, 1);
    a << drift;
    d << diffusion;
    return make_system(a, d);
}

/// Random diagonalizable system with eigenvalue real parts pushed away from
/// the imaginary axis (all negative when stable, all positive otherwise).
inline LinearSystem random_system(Rng& rng, int dim, bool stable) {
    while (true) {
        Eigen::MatrixXd a(dim, dim), m(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) {
                a(r, c) = 2.0 * rng.uniform() - 1.0;
                m(r, c) = 2.0 * rng.uniform() - 1.0;
            }
        const Eigen::VectorXcd eig = a.eigenvalues();
        double max_re = -1e300, min_re = 1e300;
        for (int r = 0; r < dim; ++r) {
            max_re = std::max(max_re, eig(r).real());
            min_re = std::min(min_re, eig(r).real());
        }
        const double shift = stable ? max_re + 0.2 : min_re - 0.2;
        a -= shift * Eigen::MatrixXd::Identity(dim, dim);

        // keep the eigenbasis well conditioned so tolerances stay meaningful
        Eigen::EigenSolver<Eigen::MatrixXd> es(a);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(es.eigenvectors());
        if (svd.singularValues().minCoeff() <= 0.0) continue;
        if (svd.singularValues().maxCoeff() / svd.singularValues().minCoeff() > 1e4)
            continue;
        return make_system(a, m * m.transpose());
    }
}

}  // namespace semsched::testsupport
