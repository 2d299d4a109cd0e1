#include "ridgewalk/spectral.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "ridgewalk/io.hpp"

namespace ridgewalk {

namespace {

void require_square(const Mat& a, const char* who) {
    if (a.rows() == 0 || a.rows() != a.cols())
        throw std::invalid_argument(std::string(who) + ": matrix must be square");
}

// Householder similarity reduction to upper Hessenberg, in place.
void hessenberg(Mat& h) {
    const std::size_t n = h.rows();
    Vec v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double sigma2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) sigma2 += h(i, k) * h(i, k);
        if (sigma2 == 0.0) continue;
        const double sigma = std::sqrt(sigma2);
        const double alpha = h(k + 1, k) >= 0.0 ? -sigma : sigma;
        double vnorm2 = sigma2 - 2.0 * alpha * h(k + 1, k) + alpha * alpha;
        if (vnorm2 == 0.0) continue;
        v[k + 1] = h(k + 1, k) - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
        const double beta = 2.0 / vnorm2;
        // left: H -= beta v (v^T H) on rows k+1..n-1
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += v[i] * h(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
        }
        // right: H -= beta (H v) v^T on cols k+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * v[j];
        }
        h(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
// Classic EISPACK-style sweep: deflate trailing 1x1/2x2 blocks, otherwise
// chase a 3x1 bulge down the active window. Returns the number of leading
// indices still unresolved when the iteration cap strikes (0 on success);
// out[r..n) always holds converged eigenvalues.
int hqr_eigenvalues(Mat& h, std::vector<std::complex<double>>& out) {
    const int n = static_cast<int>(h.rows());
    out.assign(n, {0.0, 0.0});
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(h(i, j));
    if (anorm == 0.0) anorm = 1.0;

    const long max_total = 100L * n * n;
    long total = 0;
    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l;
        for (;;) {
            for (l = nn; l >= 1; --l) {
                double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(h(l, l - 1)) <= DBL_EPSILON * s) {
                    h(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = h(nn, nn);
            if (l == nn) {  // one real eigenvalue deflates
                out[nn] = {x + t, 0.0};
                --nn;
                break;
            }
            double y = h(nn - 1, nn - 1);
            double w = h(nn, nn - 1) * h(nn - 1, nn);
            if (l == nn - 1) {  // 2x2 block deflates
                double p = 0.5 * (y - x);
                const double q = p * p + w;
                double z = std::sqrt(std::abs(q));
                x += t;
                if (q >= 0.0) {
                    z = p + (p >= 0.0 ? z : -z);
                    out[nn - 1] = {x + z, 0.0};
                    out[nn] = out[nn - 1];
                    if (z != 0.0) out[nn] = {x - w / z, 0.0};
                } else {
                    out[nn - 1] = {x + p, z};
                    out[nn] = {x + p, -z};
                }
                nn -= 2;
                break;
            }
            if (total >= max_total) return nn + 1;
            if (its == 10 || its == 20) {  // exceptional shift
                t += x;
                for (int i = 0; i <= nn; ++i) h(i, i) -= x;
                const double s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
                y = x = 0.75 * s;
                w = -0.4375 * s * s;
            }
            ++its;
            ++total;
            // two consecutive small subdiagonals locate the bulge start
            int m;
            double p = 0.0, q = 0.0, r = 0.0;
            for (m = nn - 2; m >= l; --m) {
                const double z = h(m, m);
                const double rr = x - z;
                const double ss = y - z;
                p = (rr * ss - w) / h(m + 1, m) + h(m, m + 1);
                q = h(m + 1, m + 1) - z - rr - ss;
                r = h(m + 2, m + 1);
                const double scale = std::abs(p) + std::abs(q) + std::abs(r);
                if (scale != 0.0) {
                    p /= scale;
                    q /= scale;
                    r /= scale;
                }
                if (m == l) break;
                const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
                const double v = std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) +
                                                std::abs(h(m + 1, m + 1)));
                if (u <= DBL_EPSILON * v) break;
            }
            for (int i = m + 2; i <= nn; ++i) h(i, i - 2) = 0.0;
            for (int i = m + 3; i <= nn; ++i) h(i, i - 3) = 0.0;
            for (int k = m; k <= nn - 1; ++k) {  // chase the bulge
                if (k != m) {
                    p = h(k, k - 1);
                    q = h(k + 1, k - 1);
                    r = (k + 1 != nn) ? h(k + 2, k - 1) : 0.0;
                    x = std::abs(p) + std::abs(q) + std::abs(r);
                    if (x != 0.0) {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                double s = std::sqrt(p * p + q * q + r * r);
                if (p < 0.0) s = -s;
                if (s == 0.0) continue;
                if (k == m) {
                    if (l != m) h(k, k - 1) = -h(k, k - 1);
                } else {
                    h(k, k - 1) = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                const double z = r / s;
                q /= p;
                r /= p;
                for (int j = k; j <= nn; ++j) {  // row transform
                    double pp = h(k, j) + q * h(k + 1, j);
                    if (k + 1 != nn) {
                        pp += r * h(k + 2, j);
                        h(k + 2, j) -= pp * z;
                    }
                    h(k + 1, j) -= pp * y;
                    h(k, j) -= pp * x;
                }
                const int mmin = nn < k + 3 ? nn : k + 3;
                for (int i = l; i <= mmin; ++i) {  // column transform
                    double pp = x * h(i, k) + y * h(i, k + 1);
                    if (k + 1 != nn) {
                        pp += z * h(i, k + 2);
                        h(i, k + 2) -= pp * r;
                    }
                    h(i, k + 1) -= pp * q;
                    h(i, k) -= pp;
                }
            }
        }
    }
    return 0;
}

bool modulus_order(const std::complex<double>& a, const std::complex<double>& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

} // namespace

Spectrum eig_general(const Mat& a) {
    require_square(a, "eig_general");
    const std::size_t n = a.rows();
    Spectrum s;
    if (n == 1) {
        s.eigenvalues = {{a(0, 0), 0.0}};
        return s;
    }
    Mat h = a;
    hessenberg(h);
    std::vector<std::complex<double>> vals;
    const int unresolved = hqr_eigenvalues(h, vals);
    if (unresolved > 0) {
        s.complete = false;
        vals.erase(vals.begin(), vals.begin() + unresolved);
    }
    std::sort(vals.begin(), vals.end(), modulus_order);
    s.eigenvalues = std::move(vals);
    return s;
}

std::vector<EigPair> eig_symmetric(const Mat& a) {
    require_square(a, "eig_symmetric");
    const std::size_t n = a.rows();
    double asym = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
            scale = std::max(scale, std::abs(a(i, j)));
        }
    if (asym > 1e-9 * std::max(1.0, scale))
        throw std::invalid_argument("eig_symmetric: matrix is not symmetric");

    Mat m = a;
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
        if (off <= 1e-30 * std::max(1.0, scale * scale)) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (apq == 0.0) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double tt = (theta >= 0.0 ? 1.0 : -1.0) /
                                  (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(tt * tt + 1.0);
                const double sn = tt * c;
                for (std::size_t k = 0; k < n; ++k) {  // rotate rows/cols p,q
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - sn * mkq;
                    m(k, q) = sn * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - sn * mqk;
                    m(q, k) = sn * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
    }
    std::vector<EigPair> pairs(n);
    for (std::size_t i = 0; i < n; ++i) {
        pairs[i].value = m(i, i);
        pairs[i].vector.resize(n);
        for (std::size_t k = 0; k < n; ++k) pairs[i].vector[k] = v(k, i);
    }
    std::sort(pairs.begin(), pairs.end(), [](const EigPair& x, const EigPair& y) {
        const double mx = std::abs(x.value), my = std::abs(y.value);
        if (mx != my) return mx > my;
        return x.value > y.value;
    });
    return pairs;
}

std::vector<EigPair> top_eigpairs_symmetric(const Mat& a, std::size_t n,
                                            bool power_iteration, int iters) {
    require_square(a, "top_eigpairs_symmetric");
    const std::size_t dim = a.rows();
    n = std::min(n, dim);
    if (!power_iteration) {
        auto pairs = eig_symmetric(a);
        pairs.resize(n);
        return pairs;
    }
    Mat work = a;
    std::vector<EigPair> out;
    for (std::size_t j = 0; j < n; ++j) {
        Vec v(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
        double lambda = 0.0;
        for (int it = 0; it < iters; ++it) {
            Vec av = mat_vec(work, v);
            for (const auto& prev : out) {  // keep the iterate out of found space
                const double c = dot(av, prev.vector);
                axpy(av, -c, prev.vector);
            }
            const double nrm = norm2(av);
            if (nrm == 0.0) break;
            v = vec_scale(av, 1.0 / nrm);
            lambda = dot(v, mat_vec(work, v));
            Vec resid = mat_vec(work, v);
            axpy(resid, -lambda, v);
            if (norm2(resid) <= 1e-13 * std::max(1.0, std::abs(lambda))) break;
        }
        out.push_back({lambda, v});
        for (std::size_t r = 0; r < dim; ++r)  // deflate
            for (std::size_t c = 0; c < dim; ++c) work(r, c) -= lambda * v[r] * v[c];
    }
    return out;
}

double spectral_radius(const Mat& a) {
    const Spectrum s = eig_general(a);
    if (!s.complete) throw numeric_error("spectral_radius: eigensolver did not converge");
    double r = 0.0;
    for (const auto& z : s.eigenvalues) r = std::max(r, std::abs(z));
    return r;
}

std::string spectrum_csv(const Spectrum& s) {
    std::string out = "re,im\n";
    for (const auto& z : s.eigenvalues) {
        out += format_double(z.real());
        out += ',';
        out += format_double(z.imag());
        out += '\n';
    }
    return out;
}

} // namespace ridgewalk
