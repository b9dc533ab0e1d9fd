#include "octaflow/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace octaflow {

namespace {

double default_merge_tol(const std::vector<Interval>& raw) {
    double scale = 1.0;
    for (const auto& iv : raw) scale = std::max({scale, std::fabs(iv.u), std::fabs(iv.v)});
    return 1e-12 * scale;
}

} // namespace

IntervalSet IntervalSet::normalize(std::vector<Interval> raw, double merge_tol) {
    for (const auto& iv : raw) {
        if (!(iv.u < iv.v) || !std::isfinite(iv.u) || !std::isfinite(iv.v))
            throw DegenerateInputError("interval requires finite u < v");
    }
    if (merge_tol < 0.0) merge_tol = default_merge_tol(raw);

    std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
        return a.u < b.u || (a.u == b.u && a.v < b.v);
    });

    IntervalSet out;
    for (const auto& iv : raw) {
        if (!out.intervals_.empty() && iv.u - out.intervals_.back().v <= merge_tol) {
            out.intervals_.back().v = std::max(out.intervals_.back().v, iv.v);
        } else {
            out.intervals_.push_back(iv);
        }
    }
    for (const auto& iv : out.intervals_) out.total_measure_ += iv.v - iv.u;
    return out;
}

IntervalSet IntervalSet::normalize_exact(std::vector<RationalInterval> raw) {
    for (const auto& iv : raw) {
        if (!(iv.u < iv.v)) throw DegenerateInputError("interval requires u < v");
    }
    std::sort(raw.begin(), raw.end(), [](const RationalInterval& a, const RationalInterval& b) {
        return a.u < b.u || (a.u == b.u && a.v < b.v);
    });
    std::vector<RationalInterval> merged;
    for (const auto& iv : raw) {
        if (!merged.empty() && iv.u <= merged.back().v) {
            if (merged.back().v < iv.v) merged.back().v = iv.v;
        } else {
            merged.push_back(iv);
        }
    }
    IntervalSet out;
    Rational meas(0);
    for (const auto& iv : merged) {
        out.intervals_.push_back({iv.u.to_double(), iv.v.to_double()});
        meas = meas + (iv.v - iv.u);
    }
    out.total_measure_ = meas.to_double();
    out.exact_ = std::move(merged);
    return out;
}

IntervalSet IntervalSet::restrict(double n) const {
    if (!(n > 0.0)) throw InvalidParameterError("restrict requires n > 0");
    IntervalSet out;
    for (const auto& iv : intervals_) {
        if (iv.u >= n) break;
        out.intervals_.push_back({iv.u, std::min(iv.v, n)});
        out.total_measure_ += out.intervals_.back().v - out.intervals_.back().u;
    }
    if (exact_) {
        // Keep exactness when n is exactly representable as an integer.
        double ni;
        if (std::modf(n, &ni) == 0.0 && std::fabs(n) < 9.0e15) {
            Rational rn(static_cast<std::int64_t>(n));
            std::vector<RationalInterval> ex;
            for (const auto& iv : *exact_) {
                if (!(iv.u < rn)) break;
                ex.push_back({iv.u, iv.v < rn ? iv.v : rn});
            }
            out.exact_ = std::move(ex);
        }
    }
    return out;
}

double IntervalSet::measure_upto(double n) const {
    double m = 0.0;
    for (const auto& iv : intervals_) {
        if (iv.u >= n) break;
        m += std::min(iv.v, n) - iv.u;
    }
    return m;
}

IntervalSet IntervalSet::scale_down(double factor) const {
    if (!(factor > 0.0)) throw InvalidParameterError("scale_down requires factor > 0");
    IntervalSet out;
    for (const auto& iv : intervals_) {
        out.intervals_.push_back({iv.u / factor, iv.v / factor});
        out.total_measure_ += out.intervals_.back().v - out.intervals_.back().u;
    }
    if (exact_) {
        double fi;
        if (std::modf(factor, &fi) == 0.0 && std::fabs(factor) < 9.0e15) {
            Rational rf(static_cast<std::int64_t>(factor));
            std::vector<RationalInterval> ex;
            for (const auto& iv : *exact_) ex.push_back({iv.u / rf, iv.v / rf});
            out.exact_ = std::move(ex);
        }
    }
    return out;
}

IntervalSet IntervalSet::scale_down_exact(const Rational& factor) const {
    if (!exact_) throw InvalidParameterError("scale_down_exact requires an exact set");
    std::vector<RationalInterval> ex;
    for (const auto& iv : *exact_) ex.push_back({iv.u / factor, iv.v / factor});
    return normalize_exact(std::move(ex));
}

IntervalSet IntervalSet::set_union(const IntervalSet& a, const IntervalSet& b) {
    if (a.exact_ && b.exact_) {
        std::vector<RationalInterval> raw = *a.exact_;
        raw.insert(raw.end(), b.exact_->begin(), b.exact_->end());
        return normalize_exact(std::move(raw));
    }
    std::vector<Interval> raw = a.intervals_;
    raw.insert(raw.end(), b.intervals_.begin(), b.intervals_.end());
    if (raw.empty()) return {};
    return normalize(std::move(raw));
}

void IntervalSet::write_csv(std::ostream& os) const {
    os << "u,v\n";
    char buf[80];
    for (const auto& iv : intervals_) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", iv.u, iv.v);
        os << buf;
    }
}

IntervalSet IntervalSet::read_csv(std::istream& is) {
    std::vector<Interval> raw;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == 'u' || line[0] == '#') continue;
        std::istringstream ss(line);
        double u, v;
        char comma;
        if (ss >> u >> comma >> v) raw.push_back({u, v});
    }
    if (raw.empty()) return {};
    return normalize(std::move(raw), 0.0);
}

std::string IntervalSet::to_json() const {
    nlohmann::ordered_json j;
    auto arr = nlohmann::ordered_json::array();
    if (exact_) {
        for (const auto& iv : *exact_) arr.push_back({iv.u.str(), iv.v.str()});
    } else {
        char buf[40];
        for (const auto& iv : intervals_) {
            std::snprintf(buf, sizeof buf, "%.17g", iv.u);
            std::string u = buf;
            std::snprintf(buf, sizeof buf, "%.17g", iv.v);
            arr.push_back({u, std::string(buf)});
        }
    }
    j["intervals"] = std::move(arr);
    return j.dump();
}

IntervalSet IntervalSet::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (!j.contains("intervals") || !j["intervals"].is_array())
        throw InvalidParameterError("interval JSON must contain an 'intervals' array");
    bool all_strings = true;
    for (const auto& iv : j["intervals"])
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_string() || !iv[1].is_string())
            all_strings = false;
    if (all_strings) {
        std::vector<RationalInterval> raw;
        for (const auto& iv : j["intervals"])
            raw.push_back({Rational::parse(iv[0].get<std::string>()),
                           Rational::parse(iv[1].get<std::string>())});
        if (raw.empty()) return {};
        return normalize_exact(std::move(raw));
    }
    std::vector<Interval> raw;
    for (const auto& iv : j["intervals"]) {
        auto num = [](const nlohmann::json& x) {
            return x.is_string() ? Rational::parse(x.get<std::string>()).to_double()
                                 : x.get<double>();
        };
        raw.push_back({num(iv.at(0)), num(iv.at(1))});
    }
    if (raw.empty()) return {};
    return normalize(std::move(raw));
}

double density(const IntervalSet& s, double n) {
    if (!(n > 0.0)) throw InvalidParameterError("density requires n > 0");
    return s.measure_upto(n) / n;
}

} // namespace octaflow
