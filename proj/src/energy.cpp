#include "adapt/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "adapt/student_t.hpp"

namespace adapt {

RegressionCoefficients default_coefficients(Regime r) {
    switch (r) {
        case Regime::takeoff: return {80.4, 2.6, 13.8, 18.9};
        case Regime::cruise: return {68.9, 2.0, 16.8, 15.0};
        case Regime::landing: return {71.5, 1.7, -24.3, 12.5};
    }
    throw std::invalid_argument("default_coefficients: bad regime");
}

double NormalDist::sd() const { return std::sqrt(variance); }

NormalDist prior_from_coefficients(const RegressionCoefficients& coef, double mass, double air_density) {
    if (!(mass > 0.0) || !(air_density > 0.0))
        throw std::invalid_argument("prior_from_coefficients: mass and air density must be positive");
    if (coef.b1_sd < 0.0 || coef.b0_sd < 0.0)
        throw std::invalid_argument("prior_from_coefficients: negative standard error");
    const double induced2 = mass * mass * mass / air_density;
    return {coef.b1_mean * std::sqrt(induced2) + coef.b0_mean,
            coef.b1_sd * coef.b1_sd * induced2 + coef.b0_sd * coef.b0_sd};
}

PerRegime<NormalDist> default_priors(const FlightProfile& flight) {
    PerRegime<NormalDist> out;
    for (auto r : kAllRegimes)
        out[r] = prior_from_coefficients(default_coefficients(r), flight.uav_mass, flight.air_density);
    return out;
}

double NormalGammaPosterior::precision() const { return alpha * kappa / (beta * (kappa + 1.0)); }

double NormalGammaPosterior::scale() const { return std::sqrt(beta * (kappa + 1.0) / (alpha * kappa)); }

double NormalGammaPosterior::predictive_variance() const {
    const double nu = dof();
    if (nu <= 2.0) return std::numeric_limits<double>::infinity();
    const double s = scale();
    return s * s * nu / (nu - 2.0);
}

NormalGammaPosterior ng_from_normal(const NormalDist& prior, const NgPriorConfig& cfg) {
    NormalGammaPosterior ng;
    ng.mu = cfg.mu.value_or(prior.mean);
    ng.kappa = cfg.kappa.value_or(1.0);
    ng.alpha = cfg.alpha.value_or(2.0);
    if (!cfg.beta && !(prior.variance > 0.0))
        throw ConfigError("ng_from_normal: prior variance must be positive to seed beta");
    ng.beta = cfg.beta.value_or(prior.variance);
    if (!(ng.kappa > 0.0 && ng.alpha > 0.0 && ng.beta > 0.0))
        throw ConfigError("ng_from_normal: kappa, alpha and beta must be positive");
    return ng;
}

NormalGammaPosterior update_posterior(const NormalGammaPosterior& prior, std::span<const double> samples) {
    if (samples.empty()) return prior;
    const double n = static_cast<double>(samples.size());
    // Centred on mu0: xbar - mu0 and the scatter are formed from deviations.
    double sum = 0.0;
    for (double x : samples) sum += x - prior.mu;
    const double shift = sum / n;
    double ss = 0.0;
    for (double x : samples) {
        const double d = (x - prior.mu) - shift;
        ss += d * d;
    }

    NormalGammaPosterior post;
    post.kappa = prior.kappa + n;
    post.mu = prior.mu + n * shift / post.kappa;
    post.alpha = prior.alpha + 0.5 * n;
    post.beta = prior.beta + 0.5 * ss + prior.kappa * n * shift * shift / (2.0 * post.kappa);
    return post;
}

double predictive_quantile(const NormalGammaPosterior& post, double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("predictive_quantile: theta must lie in (0, 1)");
    return post.mu + stats::student_t_quantile(theta, post.dof()) * post.scale();
}

double predictive_cdf(const NormalGammaPosterior& post, double x) {
    return stats::student_t_cdf((x - post.mu) / post.scale(), post.dof());
}

ObservationWindow::ObservationWindow(double window_length, double reading_period)
    : window_length_(window_length), reading_period_(reading_period) {
    if (!(window_length > 0.0) || !(reading_period > 0.0))
        throw ConfigError("ObservationWindow: window length and reading period must be positive");
}

void ObservationWindow::push(Regime regime, double timestamp, double power) {
    if (newest_ && timestamp < *newest_)
        throw std::invalid_argument("ObservationWindow::push: timestamp goes backwards");
    newest_ = timestamp;
    streams_[regime].push_back({timestamp, power});
    for (auto r : kAllRegimes) {
        auto& s = streams_[r];
        while (!s.empty() && timestamp - s.front().timestamp > window_length_) s.pop_front();
    }
}

std::vector<double> ObservationWindow::samples(Regime regime) const {
    std::vector<double> out;
    out.reserve(streams_[regime].size());
    for (const auto& rd : streams_[regime]) out.push_back(rd.power);
    return out;
}

std::size_t ObservationWindow::total_size() const {
    std::size_t n = 0;
    for (auto r : kAllRegimes) n += streams_[r].size();
    return n;
}

PerRegime<NormalGammaPosterior> posteriors_from_window(const PerRegime<NormalGammaPosterior>& priors,
                                                       const ObservationWindow& window) {
    PerRegime<NormalGammaPosterior> out;
    for (auto r : kAllRegimes) {
        const auto s = window.samples(r);
        out[r] = update_posterior(priors[r], s);
    }
    return out;
}

}  // namespace adapt
