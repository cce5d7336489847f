#include "laurel/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "laurel/errors.hpp"

namespace laurel {

namespace {

double log_of(const mpz_class& x) {
    signed long e = 0;
    double mant = mpz_get_d_2exp(&e, x.get_mpz_t());
    return std::log(mant) + static_cast<double>(e) * std::log(2.0);
}

// Solve the 3x3 system a x = b in place by Gaussian elimination with partial
// pivoting. Returns false when the matrix is numerically singular.
bool solve3(double a[3][3], double b[3], double x[3]) {
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(a[perm[r]][col]) > std::fabs(a[perm[piv]][col])) piv = r;
        std::swap(perm[col], perm[piv]);
        double diag = a[perm[col]][col];
        if (std::fabs(diag) < 1e-300) return false;
        for (int r = col + 1; r < 3; ++r) {
            double f = a[perm[r]][col] / diag;
            for (int c = col; c < 3; ++c) a[perm[r]][c] -= f * a[perm[col]][c];
            b[perm[r]] -= f * b[perm[col]];
        }
    }
    for (int col = 2; col >= 0; --col) {
        double s = b[perm[col]];
        for (int c = col + 1; c < 3; ++c) s -= a[perm[col]][c] * x[c];
        x[col] = s / a[perm[col]][col];
    }
    return true;
}

}  // namespace

EntropyEstimate entropy_estimate(const std::vector<mpz_class>& degrees,
                                 double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw std::invalid_argument("tail_fraction must lie in (0, 1]");
    const std::size_t n = degrees.size();
    std::size_t k = static_cast<std::size_t>(
        std::ceil(tail_fraction * static_cast<double>(n)));
    if (k > n) k = n;
    if (k < 1) k = n > 0 ? 1 : 0;

    EntropyEstimate out;
    out.tail_start = n - k;
    out.tail_end = n == 0 ? 0 : n - 1;

    std::size_t positives = 0;
    for (std::size_t i = out.tail_start; i < n; ++i)
        if (degrees[i] > 0) ++positives;
    if (positives < 10)
        throw DomainError("entropy estimate needs at least ten positive tail degrees");

    // Log-slope regression over the positive tail entries.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = out.tail_start; i < n; ++i) {
        if (!(degrees[i] > 0)) continue;
        double x = static_cast<double>(i);
        double y = log_of(degrees[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = static_cast<double>(positives);
    double denom = m * sxx - sx * sx;
    double slope = denom == 0.0 ? 0.0 : (m * sxy - sx * sy) / denom;
    if (slope < 0.0) slope = 0.0;
    out.slope = slope;
    out.lambda_hat = std::exp(slope);

    // Quadratic fit over the whole tail, skipped when the numbers no longer
    // fit comfortably in doubles.
    bool huge = false;
    for (std::size_t i = out.tail_start; i < n && !huge; ++i)
        huge = mpz_sizeinbase(degrees[i].get_mpz_t(), 2) > 500;
    if (huge || k < 3) {
        out.residual = std::numeric_limits<double>::infinity();
    } else {
        double a[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        double b[3] = {0, 0, 0};
        for (std::size_t i = out.tail_start; i < n; ++i) {
            double x = static_cast<double>(i);
            double y = mpz_get_d(degrees[i].get_mpz_t());
            double p[3] = {1.0, x, x * x};
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) a[r][c] += p[r] * p[c];
                b[r] += p[r] * y;
            }
        }
        double coef[3] = {0, 0, 0};
        if (!solve3(a, b, coef)) {
            out.residual = std::numeric_limits<double>::infinity();
        } else {
            double ss_res = 0, ss_val = 0;
            for (std::size_t i = out.tail_start; i < n; ++i) {
                double x = static_cast<double>(i);
                double y = mpz_get_d(degrees[i].get_mpz_t());
                double fit = coef[0] + coef[1] * x + coef[2] * x * x;
                ss_res += (y - fit) * (y - fit);
                ss_val += y * y;
            }
            out.residual = ss_val == 0.0 ? std::numeric_limits<double>::infinity()
                                         : std::sqrt(ss_res / ss_val);
        }
    }

    out.zero_compatible = out.residual < 0.05 && out.slope < std::log(1.05);
    return out;
}

EntropyEstimate entropy_estimate(const std::vector<std::int64_t>& degrees,
                                 double tail_fraction) {
    std::vector<mpz_class> z;
    z.reserve(degrees.size());
    for (std::int64_t d : degrees) z.emplace_back(static_cast<long>(d));
    return entropy_estimate(z, tail_fraction);
}

}  // namespace laurel
