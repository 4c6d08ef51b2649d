#ifndef GRAPHFORMS_LINALG_HPP
#define GRAPHFORMS_LINALG_HPP

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <vector>

namespace graphforms {

/// Numerical rank: count of singular values above rel_cutoff times the largest.
inline int svd_rank(const Eigen::MatrixXd& a, double rel_cutoff = 1e-10) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= 0.0) return 0;
    const double cutoff = rel_cutoff * sv[0];
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++rank;
    return rank;
}

/// Orthonormal basis of the right null space, using the same relative cutoff.
inline Eigen::MatrixXd svd_nullspace(const Eigen::MatrixXd& a, double rel_cutoff = 1e-10) {
    if (a.rows() == 0)
        return Eigen::MatrixXd::Identity(a.cols(), a.cols());
    if (a.cols() == 0) return Eigen::MatrixXd(0, 0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv.size() > 0 ? sv[0] : 0.0;
    const double cutoff = rel_cutoff * top;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++rank;
    return svd.matrixV().rightCols(a.cols() - rank);
}

/// Exact rank of an integer matrix over the rationals (Gaussian elimination
/// with exact arithmetic; no cutoff involved).
inline int exact_integer_rank(const Eigen::MatrixXi& a) {
    using boost::multiprecision::cpp_rational;
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    if (rows == 0 || cols == 0) return 0;
    std::vector<std::vector<cpp_rational>> m(static_cast<size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        m[static_cast<size_t>(r)].resize(static_cast<size_t>(cols));
        for (int c = 0; c < cols; ++c) m[static_cast<size_t>(r)][static_cast<size_t>(c)] = a(r, c);
    }
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m[static_cast<size_t>(r)][static_cast<size_t>(col)] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[static_cast<size_t>(rank)], m[static_cast<size_t>(pivot)]);
        for (int r = rank + 1; r < rows; ++r) {
            cpp_rational& lead = m[static_cast<size_t>(r)][static_cast<size_t>(col)];
            if (lead == 0) continue;
            cpp_rational factor = lead / m[static_cast<size_t>(rank)][static_cast<size_t>(col)];
            for (int c = col; c < cols; ++c)
                m[static_cast<size_t>(r)][static_cast<size_t>(c)] -=
                    factor * m[static_cast<size_t>(rank)][static_cast<size_t>(c)];
        }
        ++rank;
    }
    return rank;
}

/// Solve a symmetric positive definite system, failing loudly on breakdown.
inline Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                 const char* context) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error(std::string("linear solve failed: ") + context);
    return ldlt.solve(b);
}

/// Solve L x = b for a singular consistent system (L symmetric PSD with
/// one-dimensional kernel spanned by constants) by grounding one coordinate.
inline Eigen::VectorXd solve_grounded(const Eigen::MatrixXd& l, const Eigen::VectorXd& b,
                                      int ground = 0) {
    const Eigen::Index n = l.rows();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    if (n <= 1) return x;
    std::vector<Eigen::Index> keep;
    keep.reserve(static_cast<size_t>(n - 1));
    for (Eigen::Index i = 0; i < n; ++i)
        if (i != ground) keep.push_back(i);
    Eigen::MatrixXd lr(n - 1, n - 1);
    Eigen::VectorXd br(n - 1);
    for (Eigen::Index i = 0; i < n - 1; ++i) {
        br[i] = b[keep[static_cast<size_t>(i)]];
        for (Eigen::Index j = 0; j < n - 1; ++j)
            lr(i, j) = l(keep[static_cast<size_t>(i)], keep[static_cast<size_t>(j)]);
    }
    Eigen::VectorXd xr = solve_spd(lr, br, "grounded system");
    for (Eigen::Index i = 0; i < n - 1; ++i) x[keep[static_cast<size_t>(i)]] = xr[i];
    return x;
}

/// Schur complement of a symmetric matrix onto the rows/columns in `keep`
/// (sorted indices): M_KK - M_KI M_II^{-1} M_IK.
inline Eigen::MatrixXd schur_complement_onto(const Eigen::MatrixXd& m,
                                             const std::vector<int>& keep) {
    const Eigen::Index n = m.rows();
    std::vector<char> kept(static_cast<size_t>(n), 0);
    for (int k : keep) kept[static_cast<size_t>(k)] = 1;
    std::vector<Eigen::Index> interior;
    for (Eigen::Index i = 0; i < n; ++i)
        if (!kept[static_cast<size_t>(i)]) interior.push_back(i);

    const Eigen::Index nk = static_cast<Eigen::Index>(keep.size());
    const Eigen::Index ni = static_cast<Eigen::Index>(interior.size());
    Eigen::MatrixXd mkk(nk, nk), mki(nk, ni), mii(ni, ni);
    for (Eigen::Index i = 0; i < nk; ++i) {
        for (Eigen::Index j = 0; j < nk; ++j)
            mkk(i, j) = m(keep[static_cast<size_t>(i)], keep[static_cast<size_t>(j)]);
        for (Eigen::Index j = 0; j < ni; ++j)
            mki(i, j) = m(keep[static_cast<size_t>(i)], interior[static_cast<size_t>(j)]);
    }
    if (ni == 0) return mkk;
    for (Eigen::Index i = 0; i < ni; ++i)
        for (Eigen::Index j = 0; j < ni; ++j)
            mii(i, j) = m(interior[static_cast<size_t>(i)], interior[static_cast<size_t>(j)]);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(mii);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("linear solve failed: schur complement interior block");
    Eigen::MatrixXd sym = mkk - mki * ldlt.solve(mki.transpose());
    return 0.5 * (sym + sym.transpose());
}

} // namespace graphforms

#endif
