#pragma once

// Small dense complex matrices and LU with partial pivoting, shared by the
// determinant oracle, inverse iteration and the resolvent grid.

#include "chanspec/errors.hpp"
#include "chanspec/mp.hpp"

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace chanspec {

namespace detail {

inline double pivot_size(const std::complex<double>& z) { return std::abs(z); }
inline mp::Real pivot_size(const mp::Complex& z) { return mp::abs1(z); }

inline bool is_zero(const std::complex<double>& z) { return z == std::complex<double>(0.0, 0.0); }
inline bool is_zero(const mp::Complex& z) { return z.is_zero(); }

inline std::complex<double> conj_of(const std::complex<double>& z) { return std::conj(z); }
inline mp::Complex conj_of(const mp::Complex& z) { return mp::conj(z); }

} // namespace detail

template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t n, const T& fill) : n_(n), a_(n * n, fill) {}

    std::size_t size() const { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<T> a_;
};

/// PA = LU, unit lower L stored below the diagonal.
template <class T>
class LU {
public:
    explicit LU(DenseMatrix<T> a) : lu_(std::move(a)), perm_(lu_.size())
    {
        const std::size_t n = lu_.size();
        for (std::size_t i = 0; i < n; ++i) {
            perm_[i] = i;
        }
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            auto best = detail::pivot_size(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                auto s = detail::pivot_size(lu_(i, k));
                if (best < s) {
                    best = s;
                    p = i;
                }
            }
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(lu_(k, j), lu_(p, j));
                }
                std::swap(perm_[k], perm_[p]);
                odd_ = !odd_;
            }
            if (detail::is_zero(lu_(k, k))) {
                singular_ = true;
                continue;
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                if (detail::is_zero(lu_(i, k))) {
                    continue;
                }
                T m = lu_(i, k) / lu_(k, k);
                for (std::size_t j = k + 1; j < n; ++j) {
                    if (!detail::is_zero(lu_(k, j))) {
                        lu_(i, j) -= m * lu_(k, j);
                    }
                }
                lu_(i, k) = std::move(m);
            }
        }
    }

    bool singular() const { return singular_; }
    const DenseMatrix<T>& factors() const { return lu_; }

    T determinant() const
    {
        T d = lu_(0, 0);
        for (std::size_t k = 1; k < lu_.size(); ++k) {
            d = d * lu_(k, k);
        }
        return odd_ ? -d : d;
    }

    /// Solves A x = b.
    std::vector<T> solve(const std::vector<T>& b) const
    {
        require_regular();
        const std::size_t n = lu_.size();
        std::vector<T> x(n, b[0]);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = b[perm_[i]];
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (!detail::is_zero(lu_(i, j))) {
                    x[i] -= lu_(i, j) * x[j];
                }
            }
        }
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!detail::is_zero(lu_(i, j))) {
                    x[i] -= lu_(i, j) * x[j];
                }
            }
            x[i] = x[i] / lu_(i, i);
        }
        return x;
    }

    /// Solves A^H x = b.
    std::vector<T> solve_adjoint(const std::vector<T>& b) const
    {
        require_regular();
        const std::size_t n = lu_.size();
        // A = P^T L U, so A^H = U^H L^H P.
        std::vector<T> y = b;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (!detail::is_zero(lu_(j, i))) {
                    y[i] -= detail::conj_of(lu_(j, i)) * y[j];
                }
            }
            y[i] = y[i] / detail::conj_of(lu_(i, i));
        }
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!detail::is_zero(lu_(j, i))) {
                    y[i] -= detail::conj_of(lu_(j, i)) * y[j];
                }
            }
        }
        std::vector<T> x(n, b[0]);
        for (std::size_t i = 0; i < n; ++i) {
            x[perm_[i]] = y[i];
        }
        return x;
    }

private:
    void require_regular() const
    {
        if (singular_) {
            throw NumericError("LU solve with an exactly singular matrix");
        }
    }

    DenseMatrix<T> lu_;
    std::vector<std::size_t> perm_;
    bool odd_ = false;
    bool singular_ = false;
};

} // namespace chanspec
