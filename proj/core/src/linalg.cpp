#include "nullctl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace nullctl {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxJacobiSweeps = 100;

void require_finite(const Matrix& a, const char* what) {
    if (!all_finite(a))
        throw NumericalError(std::string(what) + ": non-finite matrix entries");
}

void require_square(const Matrix& a, const char* what) {
    if (!a.square())
        throw InvalidArgument(std::string(what) + ": matrix must be square");
}

double sign_of(double magnitude, double sign) { return sign >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude); }

// Gram matrix of the smaller side: A^T A when cols <= rows, else A A^T.
Matrix gram(const Matrix& a) {
    const bool use_cols = a.cols() <= a.rows();
    const std::size_t n = use_cols ? a.cols() : a.rows();
    const std::size_t inner = use_cols ? a.rows() : a.cols();
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < inner; ++k)
                s += use_cols ? a(k, i) * a(k, j) : a(i, k) * a(j, k);
            g(i, j) = s;
            g(j, i) = s;
        }
    return g;
}

std::vector<double> jacobi_eigenvalues(Matrix a) {
    const std::size_t n = a.rows();
    double frob = 0.0;
    for (double v : a.data())
        frob += v * v;
    frob = std::sqrt(frob);

    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= kEps * frob * 1e-2 || off == 0.0) {
            std::vector<double> d(n);
            for (std::size_t i = 0; i < n; ++i)
                d[i] = a(i, i);
            std::sort(d.begin(), d.end());
            return d;
        }

        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0)
                    continue;
                const double g = 100.0 * std::abs(apq);
                if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
                    std::abs(a(q, q)) + g == std::abs(a(q, q))) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150)
                    t = 0.5 / theta;
                else
                    t = sign_of(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
    }
    throw NumericalError("Jacobi eigenvalue iteration did not converge");
}

void balance(Matrix& a) {
    const std::size_t n = a.rows();
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            if (c == 0.0 || r == 0.0)
                continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                g = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j)
                    a(i, j) *= g;
                for (std::size_t j = 0; j < n; ++j)
                    a(j, i) *= f;
            }
        }
    }
}

// Gaussian elimination with pivoting to upper Hessenberg form (similarity transform).
void reduce_to_hessenberg(Matrix& a) {
    const std::size_t n = a.rows();
    for (std::size_t m = 1; m + 1 < n; ++m) {
        double x = 0.0;
        std::size_t pivot = m;
        for (std::size_t j = m; j < n; ++j)
            if (std::abs(a(j, m - 1)) > std::abs(x)) {
                x = a(j, m - 1);
                pivot = j;
            }
        if (pivot != m) {
            for (std::size_t j = m - 1; j < n; ++j)
                std::swap(a(pivot, j), a(m, j));
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(j, pivot), a(j, m));
        }
        if (x == 0.0)
            continue;
        for (std::size_t i = m + 1; i < n; ++i) {
            double y = a(i, m - 1);
            if (y == 0.0)
                continue;
            y /= x;
            a(i, m - 1) = y;
            for (std::size_t j = m; j < n; ++j)
                a(i, j) -= y * a(m, j);
            for (std::size_t j = 0; j < n; ++j)
                a(j, m) += y * a(j, i);
        }
    }
    for (std::size_t i = 2; i < n; ++i)
        for (std::size_t j = 0; j + 1 < i; ++j)
            a(i, j) = 0.0;
}

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr structure).
std::vector<Complex> hessenberg_qr(Matrix& a) {
    const int n = static_cast<int>(a.rows());
    std::vector<Complex> w(static_cast<std::size_t>(n));
    auto A = [&a](int i, int j) -> double& { return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j)
            anorm += std::abs(A(i, j));

    int nn = n - 1;
    double t = 0.0;
    double p = 0.0, q = 0.0, r = 0.0, s = 0.0, x = 0.0, y = 0.0, z = 0.0, u = 0.0, v = 0.0, ww = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l > 0; --l) {
                s = std::abs(A(l - 1, l - 1)) + std::abs(A(l, l));
                if (s == 0.0)
                    s = anorm;
                if (std::abs(A(l, l - 1)) <= kEps * s) {
                    A(l, l - 1) = 0.0;
                    break;
                }
            }
            x = A(nn, nn);
            if (l == nn) {
                w[static_cast<std::size_t>(nn--)] = x + t;
            } else {
                y = A(nn - 1, nn - 1);
                ww = A(nn, nn - 1) * A(nn - 1, nn);
                if (l == nn - 1) {
                    p = 0.5 * (y - x);
                    q = p * p + ww;
                    z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        w[static_cast<std::size_t>(nn - 1)] = w[static_cast<std::size_t>(nn)] = x + z;
                        if (z != 0.0)
                            w[static_cast<std::size_t>(nn)] = x - ww / z;
                    } else {
                        w[static_cast<std::size_t>(nn)] = Complex(x + p, -z);
                        w[static_cast<std::size_t>(nn - 1)] = std::conj(w[static_cast<std::size_t>(nn)]);
                    }
                    nn -= 2;
                } else {
                    if (its == 60)
                        throw NumericalError("QR eigenvalue iteration did not converge");
                    if (its == 10 || its == 20 || its == 40) {
                        t += x;
                        for (int i = 0; i <= nn; ++i)
                            A(i, i) -= x;
                        s = std::abs(A(nn, nn - 1)) + std::abs(A(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        ww = -0.4375 * s * s;
                    }
                    ++its;
                    int m = nn - 2;
                    for (; m >= l; --m) {
                        z = A(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - ww) / A(m + 1, m) + A(m, m + 1);
                        q = A(m + 1, m + 1) - z - r - s;
                        r = A(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l)
                            break;
                        u = std::abs(A(m, m - 1)) * (std::abs(q) + std::abs(r));
                        v = std::abs(p) * (std::abs(A(m - 1, m - 1)) + std::abs(z) + std::abs(A(m + 1, m + 1)));
                        if (u <= kEps * v)
                            break;
                    }
                    for (int i = m; i < nn - 1; ++i) {
                        A(i + 2, i) = 0.0;
                        if (i != m)
                            A(i + 2, i - 1) = 0.0;
                    }
                    for (int k = m; k < nn; ++k) {
                        if (k != m) {
                            p = A(k, k - 1);
                            q = A(k + 1, k - 1);
                            r = 0.0;
                            if (k + 1 != nn)
                                r = A(k + 2, k - 1);
                            if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        if ((s = sign_of(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
                            if (k == m) {
                                if (l != m)
                                    A(k, k - 1) = -A(k, k - 1);
                            } else {
                                A(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = A(k, j) + q * A(k + 1, j);
                                if (k + 1 != nn) {
                                    p += r * A(k + 2, j);
                                    A(k + 2, j) -= p * z;
                                }
                                A(k + 1, j) -= p * y;
                                A(k, j) -= p * x;
                            }
                            const int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * A(i, k) + y * A(i, k + 1);
                                if (k + 1 != nn) {
                                    p += z * A(i, k + 2);
                                    A(i, k + 2) -= p * r;
                                }
                                A(i, k + 1) -= p * q;
                                A(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l + 1 < nn);
    }
    return w;
}

// Unit null vector of (A - lambda I) by complete-pivoting elimination; the free
// variable is the last pivot position.
std::vector<Complex> null_vector(const Matrix& a, Complex lambda) {
    const std::size_t n = a.rows();
    ComplexMatrix m = to_complex(a);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) -= lambda;

    std::vector<std::size_t> colperm(n);
    std::iota(colperm.begin(), colperm.end(), std::size_t{0});
    std::size_t eliminated = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t pr = k, pc = k;
        double best = -1.0;
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j)
                if (std::abs(m(i, j)) > best) {
                    best = std::abs(m(i, j));
                    pr = i;
                    pc = j;
                }
        if (best == 0.0)
            break;
        if (pr != k)
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m(pr, j), m(k, j));
        if (pc != k) {
            for (std::size_t i = 0; i < n; ++i)
                std::swap(m(i, pc), m(i, k));
            std::swap(colperm[pc], colperm[k]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = m(i, k) / m(k, k);
            if (f == Complex{})
                continue;
            for (std::size_t j = k; j < n; ++j)
                m(i, j) -= f * m(k, j);
        }
        eliminated = k + 1;
    }

    // Free variables beyond the eliminated block are set to zero except the last one.
    std::vector<Complex> y(n, Complex{});
    y[n - 1] = 1.0;
    for (std::size_t ii = eliminated; ii-- > 0;) {
        Complex sum{};
        for (std::size_t j = ii + 1; j < n; ++j)
            sum += m(ii, j) * y[j];
        y[ii] = -sum / m(ii, ii);
    }
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[colperm[i]] = y[i];

    double norm = 0.0;
    std::size_t lead = 0;
    for (std::size_t i = 0; i < n; ++i) {
        norm += std::norm(v[i]);
        if (std::abs(v[i]) > std::abs(v[lead]))
            lead = i;
    }
    norm = std::sqrt(norm);
    const Complex phase = std::conj(v[lead]) / std::abs(v[lead]);
    for (auto& c : v)
        c = c * phase / norm;
    v[lead] = std::abs(v[lead]);
    return v;
}

} // namespace

double spectral_norm(const Matrix& a) {
    require_finite(a, "spectral_norm");
    if (a.empty())
        return 0.0;
    const auto ev = symmetric_eigenvalues(gram(a));
    return std::sqrt(std::max(ev.back(), 0.0));
}

double spectral_norm(const ComplexMatrix& a) {
    if (a.empty())
        return 0.0;
    for (const auto& v : a.data())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericalError("spectral_norm: non-finite matrix entries");
    const bool use_cols = a.cols() <= a.rows();
    const std::size_t n = use_cols ? a.cols() : a.rows();
    const std::size_t inner = use_cols ? a.rows() : a.cols();
    // Hermitian Gram matrix G embedded as the real symmetric [[Re G, -Im G], [Im G, Re G]].
    Matrix s(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex g{};
            for (std::size_t k = 0; k < inner; ++k)
                g += use_cols ? std::conj(a(k, i)) * a(k, j) : a(i, k) * std::conj(a(j, k));
            s(i, j) = g.real();
            s(i + n, j + n) = g.real();
            s(i, j + n) = -g.imag();
            s(i + n, j) = g.imag();
        }
    const auto ev = symmetric_eigenvalues(s);
    return std::sqrt(std::max(ev.back(), 0.0));
}

std::vector<double> symmetric_eigenvalues(const Matrix& s) {
    require_square(s, "symmetric_eigenvalues");
    require_finite(s, "symmetric_eigenvalues");
    const std::size_t n = s.rows();
    if (n == 0)
        return {};
    if (n == 1)
        return {s(0, 0)};
    if (n == 2) {
        const double mean = 0.5 * (s(0, 0) + s(1, 1));
        const double radius = std::hypot(0.5 * (s(0, 0) - s(1, 1)), s(0, 1));
        return {mean - radius, mean + radius};
    }
    Matrix a = s;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            a(i, j) = a(j, i);
    return jacobi_eigenvalues(std::move(a));
}

std::vector<double> singular_values(const Matrix& a_in) {
    require_finite(a_in, "singular_values");
    Matrix u = a_in.cols() > a_in.rows() ? a_in.transpose() : a_in;
    const std::size_t m = u.rows();
    const std::size_t n = u.cols();
    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    alpha += u(k, i) * u(k, i);
                    beta += u(k, j) * u(k, j);
                    gamma += u(k, i) * u(k, j);
                }
                if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta))
                    continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = sign_of(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < m; ++k) {
                    const double ui = u(k, i);
                    const double uj = u(k, j);
                    u(k, i) = c * ui - s * uj;
                    u(k, j) = s * ui + c * uj;
                }
            }
        if (!rotated) {
            std::vector<double> sigma(n);
            for (std::size_t j = 0; j < n; ++j) {
                Vector col(m);
                for (std::size_t k = 0; k < m; ++k)
                    col[k] = u(k, j);
                sigma[j] = norm2(col);
            }
            std::sort(sigma.begin(), sigma.end(), std::greater<>());
            return sigma;
        }
    }
    throw NumericalError("one-sided Jacobi SVD did not converge");
}

std::vector<Complex> eigenvalues(const Matrix& a_in) {
    require_square(a_in, "eigenvalues");
    require_finite(a_in, "eigenvalues");
    if (a_in.rows() == 0)
        return {};
    Matrix a = a_in;
    balance(a);
    reduce_to_hessenberg(a);
    auto w = hessenberg_qr(a);
    std::stable_sort(w.begin(), w.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real())
            return x.real() < y.real();
        if (std::abs(x.imag()) != std::abs(y.imag()))
            return std::abs(x.imag()) < std::abs(y.imag());
        return x.imag() > y.imag();
    });
    return w;
}

Spectrum eigen(const Matrix& a) {
    Spectrum s;
    s.eigenvalues = eigenvalues(a);
    const std::size_t n = a.rows();
    const double scale = spectral_norm(a);
    const double gap = 1e-8 * scale;
    s.distinct = true;
    for (std::size_t i = 0; i < n && s.distinct; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!(std::abs(s.eigenvalues[i] - s.eigenvalues[j]) > gap)) {
                s.distinct = false;
                break;
            }
    if (!s.distinct)
        return s;

    s.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto v = null_vector(a, s.eigenvalues[k]);
        for (std::size_t i = 0; i < n; ++i)
            s.eigenvectors(i, k) = v[i];
    }
    return s;
}

Matrix controllability_matrix(const Matrix& a, const Matrix& b) {
    if (!a.square() || a.rows() != b.rows())
        throw InvalidArgument("controllability_matrix: dimension mismatch (A must be n x n, B n x m)");
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    Matrix c(n, n * m);
    Matrix block = b;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                c(i, k * m + j) = block(i, j);
        if (k + 1 < n)
            block = a * block;
    }
    return c;
}

std::size_t rank(const Matrix& m, double tol_rel) {
    if (!(tol_rel > 0.0))
        throw InvalidArgument("rank: tolerance must be positive");
    if (m.empty())
        return 0;
    const auto sigma = singular_values(m);
    if (sigma.empty() || sigma.front() == 0.0)
        return 0;
    const double threshold = tol_rel * sigma.front() * static_cast<double>(std::max(m.rows(), m.cols()));
    return static_cast<std::size_t>(
        std::count_if(sigma.begin(), sigma.end(), [threshold](double v) { return v > threshold; }));
}

double eigvec_condition(const Spectrum& s) {
    if (!s.distinct || s.eigenvectors.empty())
        throw NumericalError("eigvec_condition: repeated eigenvalues, matrix is not diagonalizable");
    const double k = spectral_norm(s.eigenvectors) * spectral_norm(inverse(s.eigenvectors));
    return std::max(k, 1.0);
}

double determinant(const Matrix& a_in) {
    require_square(a_in, "determinant");
    Matrix a = a_in;
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k)))
                p = i;
        if (a(p, k) == 0.0)
            return 0.0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(p, j), a(k, j));
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j)
                a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

Matrix solve(const Matrix& a_in, const Matrix& b_in) {
    require_square(a_in, "solve");
    if (a_in.rows() != b_in.rows())
        throw InvalidArgument("solve: dimension mismatch");
    require_finite(a_in, "solve");
    Matrix a = a_in;
    Matrix b = b_in;
    const std::size_t n = a.rows();
    const std::size_t k_cols = b.cols();
    double amax = 0.0;
    for (double v : a.data())
        amax = std::max(amax, std::abs(v));
    const double tiny = static_cast<double>(n) * kEps * amax;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k)))
                p = i;
        if (std::abs(a(p, k)) <= tiny)
            throw NumericalError("solve: matrix is singular to working precision");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(p, j), a(k, j));
            for (std::size_t j = 0; j < k_cols; ++j)
                std::swap(b(p, j), b(k, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0)
                continue;
            for (std::size_t j = k; j < n; ++j)
                a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < k_cols; ++j)
                b(i, j) -= f * b(k, j);
        }
    }
    Matrix x(n, k_cols);
    for (std::size_t c = 0; c < k_cols; ++c)
        for (std::size_t i = n; i-- > 0;) {
            double s = b(i, c);
            for (std::size_t j = i + 1; j < n; ++j)
                s -= a(i, j) * x(j, c);
            x(i, c) = s / a(i, i);
        }
    return x;
}

ComplexMatrix inverse(const ComplexMatrix& a_in) {
    if (!a_in.square())
        throw InvalidArgument("inverse: matrix must be square");
    const std::size_t n = a_in.rows();
    ComplexMatrix a = a_in;
    ComplexMatrix inv = ComplexMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k)))
                p = i;
        if (a(p, k) == Complex{})
            throw NumericalError("inverse: matrix is singular");
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(p, j), a(k, j));
                std::swap(inv(p, j), inv(k, j));
            }
        const Complex pivot = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= pivot;
            inv(k, j) /= pivot;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k)
                continue;
            const Complex f = a(i, k);
            if (f == Complex{})
                continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

double condition_number(const Matrix& a) {
    const auto sigma = singular_values(a);
    if (sigma.empty())
        return 1.0;
    if (sigma.back() == 0.0)
        return std::numeric_limits<double>::infinity();
    return sigma.front() / sigma.back();
}

} // namespace nullctl
