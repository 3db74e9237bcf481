#pragma once
#include <cmath>
#include <utility>
#include <vector>

namespace hygro {

// Analytic forcing signal of dimensionless time. Three declarative forms:
//   constant              base
//   sinusoid              base + amplitude * sin(2*pi*(t - phase)/period)
//   squared sinusoid      base + amplitude * sin^2(2*pi*(t - phase)/period)
// plus an additive piecewise-constant schedule (list of [from, to) windows).
class Signal {
public:
    enum class Form { Constant, Sin, SinSquared };

    struct Window {
        double from = 0.0, to = 0.0, value = 0.0;
    };

    Signal() = default;
    explicit Signal(double base) : base_(base) {}
    Signal(Form form, double base, double amplitude, double period, double phase = 0.0)
        : form_(form), base_(base), amplitude_(amplitude), period_(period), phase_(phase) {}

    static Signal constant(double value) { return Signal(value); }
    static Signal sinusoid(double base, double amplitude, double period, double phase = 0.0) {
        return Signal(Form::Sin, base, amplitude, period, phase);
    }
    static Signal sin_squared(double base, double amplitude, double period, double phase = 0.0) {
        return Signal(Form::SinSquared, base, amplitude, period, phase);
    }
    static Signal schedule(double base, std::vector<Window> windows) {
        Signal s(base);
        s.windows_ = std::move(windows);
        return s;
    }

    double operator()(double t) const {
        double v = base_;
        if (form_ == Form::Sin) {
            v += amplitude_ * std::sin(2.0 * M_PI * (t - phase_) / period_);
        } else if (form_ == Form::SinSquared) {
            const double s = std::sin(2.0 * M_PI * (t - phase_) / period_);
            v += amplitude_ * s * s;
        }
        for (const auto& w : windows_)
            if (t >= w.from && t < w.to) v += w.value;
        return v;
    }

    // Envelope [min, max] over all t, used for a-priori state boxes.
    std::pair<double, double> range() const {
        double lo = base_, hi = base_;
        if (form_ == Form::Sin) {
            lo -= std::abs(amplitude_);
            hi += std::abs(amplitude_);
        } else if (form_ == Form::SinSquared) {
            lo = std::min(base_, base_ + amplitude_);
            hi = std::max(base_, base_ + amplitude_);
        }
        double extra_lo = 0.0, extra_hi = 0.0;
        for (const auto& w : windows_) {
            extra_lo = std::min(extra_lo, w.value);
            extra_hi = std::max(extra_hi, w.value);
        }
        return {lo + extra_lo, hi + extra_hi};
    }

    // Uniform scaling of base, amplitude, and window values.
    Signal scaled(double factor) const {
        Signal s = *this;
        s.base_ *= factor;
        s.amplitude_ *= factor;
        for (auto& w : s.windows_) w.value *= factor;
        return s;
    }

private:
    Form form_ = Form::Constant;
    double base_ = 0.0;
    double amplitude_ = 0.0;
    double period_ = 1.0;
    double phase_ = 0.0;
    std::vector<Window> windows_;
};

}  // namespace hygro
