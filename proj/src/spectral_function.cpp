#include "coherlss/spectral_function.hpp"

#include <cmath>
#include <sstream>

#include "coherlss/errors.hpp"

namespace coherlss {

SpectralFunction::SpectralFunction(FunctionKind kind, std::string name)
    : kind_(kind), name_(std::move(name))
{}

SpectralFunction SpectralFunction::square_centered()
{
    SpectralFunction f(FunctionKind::square_centered, "square_centered");
    f.real_ = [](double x) { return (x - 1.0) * (x - 1.0); };
    f.complex_ = [](std::complex<double> z) { return (z - 1.0) * (z - 1.0); };
    return f;
}

SpectralFunction SpectralFunction::log()
{
    SpectralFunction f(FunctionKind::log, "log");
    f.real_ = [](double x) {
        if (!(x > 0.0)) {
            throw DomainError("log evaluated at a non-positive point", x);
        }
        return std::log(x);
    };
    f.complex_ = [](std::complex<double> z) {
        if (!(z.real() > 0.0)) {
            throw DomainError("log continued outside the right half plane", z.real());
        }
        return std::log(z);
    };
    return f;
}

SpectralFunction SpectralFunction::polynomial(std::vector<double> coefficients)
{
    std::ostringstream os;
    os.precision(17);
    os << "polynomial(";
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        os << (i ? "," : "") << coefficients[i];
    }
    os << ")";
    SpectralFunction f(FunctionKind::polynomial, os.str());
    f.coefficients_ = std::move(coefficients);
    auto horner = [coeffs = f.coefficients_](auto x) {
        decltype(x) acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            acc = acc * x + *it;
        }
        return acc;
    };
    f.real_ = [horner](double x) { return horner(x); };
    f.complex_ = [horner](std::complex<double> z) { return horner(z); };
    return f;
}

SpectralFunction SpectralFunction::callable(std::string name, RealFn fn, ComplexFn extension)
{
    if (!fn) {
        throw InvalidArgument("callable spectral function needs a real evaluator");
    }
    SpectralFunction f(FunctionKind::callable, std::move(name));
    f.real_ = std::move(fn);
    f.complex_ = std::move(extension);
    return f;
}

SpectralFunction SpectralFunction::from_name(const std::string& name)
{
    if (name == "square_centered") {
        return square_centered();
    }
    if (name == "log") {
        return log();
    }
    if (name == "identity") {
        return polynomial({0.0, 1.0});
    }
    throw InvalidArgument("unknown spectral function '" + name +
                          "' (expected square_centered, log or identity)");
}

double SpectralFunction::operator()(double lambda) const { return real_(lambda); }

std::complex<double> SpectralFunction::operator()(std::complex<double> z) const
{
    if (!complex_) {
        throw InvalidArgument("spectral function '" + name_ + "' has no holomorphic extension");
    }
    return complex_(z);
}

bool SpectralFunction::is_analytic() const noexcept { return static_cast<bool>(complex_); }

SpectralFunction SpectralFunction::combine(double a, const SpectralFunction& f, double b,
                                           const SpectralFunction& g)
{
    std::ostringstream os;
    os.precision(17);
    os << a << "*" << f.name() << "+" << b << "*" << g.name();
    RealFn real = [a, b, f, g](double x) { return a * f(x) + b * g(x); };
    ComplexFn ext;
    if (f.is_analytic() && g.is_analytic()) {
        ext = [a, b, f, g](std::complex<double> z) { return a * f(z) + b * g(z); };
    }
    return callable(os.str(), std::move(real), std::move(ext));
}

} // namespace coherlss
