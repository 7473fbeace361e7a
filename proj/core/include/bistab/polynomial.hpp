#pragma once

#include <cstddef>
#include <vector>

namespace bistab {

// Dense polynomial in one variable, coefficients in ascending power order.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

    double operator()(double x) const {
        double v = 0.0;
        for (std::size_t k = c_.size(); k-- > 0;) v = v * x + c_[k];
        return v;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial{};
        std::vector<double> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
        return Polynomial(std::move(d));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<double>& coeffs() const { return c_; }
    bool empty() const { return c_.empty(); }

private:
    std::vector<double> c_;

    void trim() {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }
};

}  // namespace bistab
