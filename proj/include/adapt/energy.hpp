#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "adapt/common.hpp"
#include "adapt/instance.hpp"

namespace adapt {

/// Linear regression of average power on induced hover power, with bootstrap
/// standard errors for each coefficient.
struct RegressionCoefficients {
    double b1_mean = 0.0;
    double b1_sd = 0.0;
    double b0_mean = 0.0;
    double b0_sd = 0.0;
};

/// Published coefficients for the DJI M100 flight regimes.
RegressionCoefficients default_coefficients(Regime r);

struct NormalDist {
    double mean = 0.0;
    double variance = 0.0;  // W^2

    double sd() const;
    friend bool operator==(const NormalDist&, const NormalDist&) = default;
};

/// Average power distribution induced by independent normal coefficients:
/// mean b1*sqrt(m^3/rho) + b0, variance sd(b1)^2*m^3/rho + sd(b0)^2.
NormalDist prior_from_coefficients(const RegressionCoefficients& coef, double mass, double air_density);

/// Priors for all three regimes from the default coefficients.
PerRegime<NormalDist> default_priors(const FlightProfile& flight);

/// Conjugate Normal-Gamma over (mean, precision) of a regime's average power.
struct NormalGammaPosterior {
    double mu = 0.0;
    double kappa = 1.0;
    double alpha = 1.0;
    double beta = 1.0;

    /// Degrees of freedom of the posterior predictive Student-t.
    double dof() const { return 2.0 * alpha; }
    /// Predictive precision alpha*kappa / (beta*(kappa+1)).
    double precision() const;
    /// Predictive scale sqrt(beta*(kappa+1) / (alpha*kappa)).
    double scale() const;
    /// Predictive variance; infinite when dof <= 2.
    double predictive_variance() const;

    friend bool operator==(const NormalGammaPosterior&, const NormalGammaPosterior&) = default;
};

/// Optional overrides for the hyperparameters derived from a normal prior.
struct NgPriorConfig {
    std::optional<double> mu;
    std::optional<double> kappa;
    std::optional<double> alpha;
    std::optional<double> beta;
};

/// Weakly informative NG prior: mu = mean, kappa = 1, alpha = 2,
/// beta = variance unless overridden. Throws ConfigError on zero variance.
NormalGammaPosterior ng_from_normal(const NormalDist& prior, const NgPriorConfig& cfg = {});

/// Batch conjugate update of a fixed prior with the given samples.
NormalGammaPosterior update_posterior(const NormalGammaPosterior& prior, std::span<const double> samples);

/// Location-scale Student-t quantile of the posterior predictive.
double predictive_quantile(const NormalGammaPosterior& post, double theta);

double predictive_cdf(const NormalGammaPosterior& post, double x);

/// Sliding window of average-power readings, one stream per regime.
/// Readings whose age relative to the newest timestamp exceeds the window
/// length are evicted; an age of exactly window_length is kept.
class ObservationWindow {
public:
    struct Reading {
        double timestamp = 0.0;
        double power = 0.0;
        friend bool operator==(const Reading&, const Reading&) = default;
    };

    explicit ObservationWindow(double window_length = 900.0, double reading_period = 20.0);

    /// Throws std::invalid_argument if timestamp precedes the newest one.
    void push(Regime regime, double timestamp, double power);

    std::vector<double> samples(Regime regime) const;
    const std::deque<Reading>& readings(Regime regime) const { return streams_[regime]; }
    std::size_t size(Regime regime) const { return streams_[regime].size(); }
    std::size_t total_size() const;

    double window_length() const { return window_length_; }
    double reading_period() const { return reading_period_; }
    std::optional<double> newest_timestamp() const { return newest_; }

    friend bool operator==(const ObservationWindow&, const ObservationWindow&) = default;

private:
    double window_length_;
    double reading_period_;
    std::optional<double> newest_;
    PerRegime<std::deque<Reading>> streams_;
};

/// Posterior for each regime from its prior and the current window.
PerRegime<NormalGammaPosterior> posteriors_from_window(const PerRegime<NormalGammaPosterior>& priors,
                                                       const ObservationWindow& window);

}  // namespace adapt
