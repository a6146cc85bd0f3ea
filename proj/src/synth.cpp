#include "cryptonet/synth.hpp"

#include <cmath>
#include <cstdio>

#include "cryptonet/errors.hpp"
#include "cryptonet/rng.hpp"

namespace cryptonet {

void SynthSpec::validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v < 1.0; };
    if (n_assets == 0) throw ConfigError("n_assets must be positive");
    if (n_days < 45) throw ConfigError("n_days must be >= 45 (transfer entropy needs > 40)");
    if (!in_unit(factor_loading)) throw ConfigError("factor_loading must be in [0, 1)");
    if (!in_unit(loading_spread)) throw ConfigError("loading_spread must be in [0, 1)");
    if (!in_unit(factor_ar)) throw ConfigError("factor_ar must be in [0, 1)");
    if (!in_unit(sentiment_loading)) throw ConfigError("sentiment_loading must be in [0, 1)");
    if (couple_fraction < 0.0 || couple_fraction > 1.0)
        throw ConfigError("couple_fraction must be in [0, 1]");
    if (!in_unit(missing_rate)) throw ConfigError("missing_rate must be in [0, 1)");
    if (!std::isfinite(coupling)) throw ConfigError("coupling must be finite");
}

SynthPanel generate(const SynthSpec& spec) {
    spec.validate();
    const std::size_t na = spec.n_assets, nd = spec.n_days;
    PairRng rng(spec.seed, 0x53594e54u /* stream tag */, na, nd);

    // Common driver, unit variance; AR(1) when factor_ar > 0.
    std::vector<double> factor(nd);
    factor[0] = rng.next_normal();
    const double ar = spec.factor_ar;
    const double innov = std::sqrt(1.0 - ar * ar);
    for (std::size_t t = 1; t < nd; ++t)
        factor[t] = ar * factor[t - 1] + innov * rng.next_normal();

    std::vector<double> load_scale(na);
    for (std::size_t i = 0; i < na; ++i)
        load_scale[i] = spec.loading_spread > 0.0
                            ? 1.0 - spec.loading_spread * rng.next_double()
                            : 1.0;

    const std::size_t n_coupled =
        static_cast<std::size_t>(std::floor(spec.couple_fraction * static_cast<double>(na)));

    SynthPanel out;
    out.panel.calendar.resize(nd);
    const Day start = day_from_ymd(2018, 1, 2);
    for (std::size_t t = 0; t < nd; ++t) out.panel.calendar[t] = start + static_cast<Day>(t);

    std::vector<std::string> asset_ids(na);
    for (std::size_t i = 0; i < na; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "A%04zu", i);
        asset_ids[i] = buf;
    }

    const std::size_t n_rows = na * 3;
    out.panel.series_ids.reserve(n_rows);
    out.panel.data.assign(n_rows * nd, 0.0);
    out.panel.mask.assign(n_rows * nd, 1);

    for (std::size_t i = 0; i < na; ++i) {
        const double lp = spec.factor_loading * load_scale[i];
        const double ls = spec.sentiment_loading * load_scale[i];
        const double np = std::sqrt(1.0 - lp * lp);
        const double ns = std::sqrt(1.0 - ls * ls);
        const bool coupled = i < n_coupled && spec.coupling != 0.0;

        const std::size_t price_row = i * 3, pos_row = i * 3 + 1, neg_row = i * 3 + 2;
        out.panel.series_ids.push_back({asset_ids[i], SeriesKind::Price});
        out.panel.series_ids.push_back({asset_ids[i], SeriesKind::PosSentiment});
        out.panel.series_ids.push_back({asset_ids[i], SeriesKind::NegSentiment});

        double prev_pos = 0.0;
        for (std::size_t t = 0; t < nd; ++t) {
            const double pos = ls * factor[t] + ns * rng.next_normal();
            const double neg = ls * factor[t] + ns * rng.next_normal();
            double price = lp * factor[t] + np * rng.next_normal();
            if (coupled && t > 0) price += spec.coupling * prev_pos;
            out.panel.data[price_row * nd + t] = price;
            out.panel.data[pos_row * nd + t] = pos;
            out.panel.data[neg_row * nd + t] = neg;
            prev_pos = pos;
        }
        if (coupled) out.truth.coupled_assets.push_back(asset_ids[i]);
        if (lp > 0.0) out.truth.factor_assets.push_back(asset_ids[i]);
    }

    if (spec.missing_rate > 0.0) {
        for (std::size_t cell = 0; cell < out.panel.mask.size(); ++cell)
            if (rng.next_double() < spec.missing_rate) out.panel.mask[cell] = 0;
    }
    return out;
}

} // namespace cryptonet
