#include "drt/lqr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "drt/error.hpp"

namespace drt {
namespace {

double mean_loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta, double q) {
    const Eigen::VectorXd r = y - X * beta;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        sum += std::max(q * r[i], (q - 1.0) * r[i]);
    }
    return sum / static_cast<double>(r.size());
}

// Largest step in [0, 1] keeping v + a*dv >= 0.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
    double a = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (dv[i] < 0.0) {
            a = std::min(a, -v[i] / dv[i]);
        }
    }
    return a;
}

// Exact interpolation of the p rows with the smallest residuals that span the
// column space, i.e. the basic solution closest to beta.
bool basic_solution(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                    Eigen::VectorXd& out) {
    const auto n = X.rows();
    const auto p = X.cols();
    const Eigen::VectorXd r = (y - X * beta).cwiseAbs();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return r[a] < r[b]; });

    Eigen::MatrixXd basis(p, p);
    std::vector<Eigen::Index> rows;
    for (auto i : order) {
        if (static_cast<Eigen::Index>(rows.size()) == p) {
            break;
        }
        Eigen::VectorXd v = X.row(i).transpose();
        const double norm = v.norm();
        if (norm == 0.0) {
            continue;
        }
        const auto k = static_cast<Eigen::Index>(rows.size());
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < k; ++j) {
                v -= basis.col(j).dot(v) * basis.col(j);
            }
        }
        const double rest = v.norm();
        if (rest > 1e-9 * norm) {
            basis.col(k) = v / rest;
            rows.push_back(i);
        }
    }
    if (static_cast<Eigen::Index>(rows.size()) != p) {
        return false;
    }
    Eigen::MatrixXd Xh(p, p);
    Eigen::VectorXd yh(p);
    for (Eigen::Index k = 0; k < p; ++k) {
        Xh.row(k) = X.row(rows[static_cast<std::size_t>(k)]);
        yh[k] = y[rows[static_cast<std::size_t>(k)]];
    }
    out = Xh.fullPivLu().solve(yh);
    return out.allFinite();
}

// Primal-dual interior point on the dual program
//   max y'a  s.t.  X'a = (1-q) X'1,  0 <= a <= 1,
// whose multipliers are -beta. Full-column-rank X only.
LqrFit solve_full_rank(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double q, const LqrOptions& opt) {
    const auto n = X.rows();
    const double nn = static_cast<double>(n);
    const Eigen::VectorXd c = -y;

    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 - q);
    Eigen::VectorXd s = Eigen::VectorXd::Constant(n, q);
    const Eigen::VectorXd b = X.transpose() * x;

    Eigen::VectorXd yd = -X.colPivHouseholderQr().solve(y);
    Eigen::VectorXd r = c - X * yd;
    const double delta = std::max(r.cwiseAbs().mean(), 1e-6 * (1.0 + y.cwiseAbs().maxCoeff()));
    Eigen::VectorXd z = r.cwiseMax(0.0).array() + delta;
    Eigen::VectorXd w = (-r).cwiseMax(0.0).array() + delta;

    LqrFit fit;
    Eigen::VectorXd dx, dy, dz, dw, ds;
    auto direction = [&](const Eigen::VectorXd& theta, const Eigen::LDLT<Eigen::MatrixXd>& M,
                         const Eigen::VectorXd& rb, const Eigen::VectorXd& rc, const Eigen::VectorXd& rxz,
                         const Eigen::VectorXd& rsw) {
        const Eigen::VectorXd t = rc.array() - rxz.array() / x.array() + rsw.array() / s.array();
        dy = M.solve(rb + X.transpose() * theta.cwiseProduct(t));
        dx = theta.cwiseProduct(X * dy - t);
        ds = -dx;
        dz = (rxz.array() - z.array() * dx.array()) / x.array();
        dw = (rsw.array() - w.array() * ds.array()) / s.array();
    };

    for (fit.iterations = 0; fit.iterations < opt.max_iterations; ++fit.iterations) {
        const double gap = x.dot(z) + s.dot(w);
        if (gap <= opt.tolerance * (1.0 + std::abs(c.dot(x)))) {
            fit.converged = true;
            break;
        }
        const Eigen::VectorXd rb = b - X.transpose() * x;
        const Eigen::VectorXd rc = c - X * yd - z + w;
        const Eigen::VectorXd theta = 1.0 / (z.array() / x.array() + w.array() / s.array());
        const Eigen::MatrixXd normal = X.transpose() * theta.asDiagonal() * X;
        const Eigen::LDLT<Eigen::MatrixXd> M(normal);
        if (M.info() != Eigen::Success) {
            break;
        }

        // Predictor.
        const Eigen::VectorXd axz = -x.cwiseProduct(z);
        const Eigen::VectorXd asw = -s.cwiseProduct(w);
        direction(theta, M, rb, rc, axz, asw);
        double ap = std::min({1.0, max_step(x, dx), max_step(s, ds)});
        double ad = std::min({1.0, max_step(z, dz), max_step(w, dw)});
        const double mu_aff = (x + ap * dx).dot(z + ad * dz) + (s + ap * ds).dot(w + ad * dw);
        const double sigma = std::pow(mu_aff / gap, 3.0);
        const double mu = sigma * gap / (2.0 * nn);

        // Corrector.
        const Eigen::VectorXd cxz = (mu - x.array() * z.array() - dx.array() * dz.array()).matrix();
        const Eigen::VectorXd csw = (mu - s.array() * w.array() - ds.array() * dw.array()).matrix();
        direction(theta, M, rb, rc, cxz, csw);
        constexpr double kFraction = 0.99995;
        ap = std::min({1.0, kFraction * max_step(x, dx), kFraction * max_step(s, ds)});
        ad = std::min({1.0, kFraction * max_step(z, dz), kFraction * max_step(w, dw)});
        x += ap * dx;
        s += ap * ds;
        yd += ad * dy;
        z += ad * dz;
        w += ad * dw;
        if (!x.allFinite() || !yd.allFinite()) {
            throw NumericError("quantile regression: interior point iterate became non-finite");
        }
    }

    fit.beta = -yd;
    fit.loss = mean_loss(X, y, fit.beta, q);
    Eigen::VectorXd vertex;
    if (basic_solution(X, y, fit.beta, vertex)) {
        const double loss = mean_loss(X, y, vertex, q);
        if (loss <= fit.loss + 1e-12 * std::max(1.0, fit.loss)) {
            fit.beta = vertex;
            fit.loss = loss;
        }
    }
    return fit;
}

}  // namespace

LqrFit fit_quantile_regression(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double q,
                               const LqrOptions& options) {
    if (!(q > 0.0 && q < 1.0)) {
        throw InvalidArgument("quantile regression level must lie in (0, 1)");
    }
    if (X.rows() != y.size()) {
        throw InvalidArgument("quantile regression: row count mismatch");
    }
    if (X.cols() == 0 || X.rows() < 2 * X.cols()) {
        throw InvalidArgument("quantile regression needs at least twice as many rows as features (" +
                              std::to_string(X.rows()) + " rows, " + std::to_string(X.cols()) + " features)");
    }
    if (!X.allFinite() || !y.allFinite()) {
        throw DataError("quantile regression: non-finite features or targets");
    }

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    const auto rank = qr.rank();
    if (rank == 0) {
        LqrFit fit;
        fit.beta = Eigen::VectorXd::Zero(X.cols());
        fit.converged = true;
        fit.loss = mean_loss(X, y, fit.beta, q);
        return fit;
    }
    std::vector<Eigen::Index> keep(static_cast<std::size_t>(rank));
    for (Eigen::Index k = 0; k < rank; ++k) {
        keep[static_cast<std::size_t>(k)] = qr.colsPermutation().indices()[k];
    }
    std::sort(keep.begin(), keep.end());
    if (rank == X.cols()) {
        return solve_full_rank(X, y, q, options);
    }
    Eigen::MatrixXd Xs(X.rows(), rank);
    for (Eigen::Index k = 0; k < rank; ++k) {
        Xs.col(k) = X.col(keep[static_cast<std::size_t>(k)]);
    }
    LqrFit sub = solve_full_rank(Xs, y, q, options);
    LqrFit fit = sub;
    fit.beta = Eigen::VectorXd::Zero(X.cols());
    for (Eigen::Index k = 0; k < rank; ++k) {
        fit.beta[keep[static_cast<std::size_t>(k)]] = sub.beta[k];
    }
    return fit;
}

}  // namespace drt
