#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace coherlss {

enum class FunctionKind { square_centered, log, polynomial, callable };

/// Test function f applied to the eigenvalues of a coherency matrix.
///
/// Every kind evaluates on the real line. Kinds with a known holomorphic
/// extension (all but a callable built without one) also evaluate at complex
/// points, which the contour route of distribution actions needs.
class SpectralFunction {
public:
    using RealFn = std::function<double(double)>;
    using ComplexFn = std::function<std::complex<double>(std::complex<double>)>;

    /// (lambda - 1)^2
    static SpectralFunction square_centered();
    static SpectralFunction log();
    /// sum_k coefficients[k] lambda^k
    static SpectralFunction polynomial(std::vector<double> coefficients);
    /// `extension` is optional; without it the function is treated as merely smooth.
    static SpectralFunction callable(std::string name, RealFn fn, ComplexFn extension = {});

    /// Parses "square_centered" / "log" / "identity".
    static SpectralFunction from_name(const std::string& name);

    double operator()(double lambda) const;
    std::complex<double> operator()(std::complex<double> z) const;

    FunctionKind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    bool is_analytic() const noexcept;
    bool requires_positive_domain() const noexcept { return kind_ == FunctionKind::log; }
    const std::vector<double>& coefficients() const noexcept { return coefficients_; }

    /// Linear combination a*f + b*g. Analytic iff both operands are.
    static SpectralFunction combine(double a, const SpectralFunction& f, double b,
                                    const SpectralFunction& g);

private:
    SpectralFunction(FunctionKind kind, std::string name);

    FunctionKind kind_;
    std::string name_;
    std::vector<double> coefficients_;
    RealFn real_;
    ComplexFn complex_;
};

} // namespace coherlss
