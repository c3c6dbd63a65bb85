/*
 * knobs.hpp
 *
 * This source file is part of the dotune project
 *
 * Copyright 2026 the dotune authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

namespace dotune {

enum class KnobKind { IntegerRange, ContinuousRange, Boolean, Enumeration };

inline std::string to_string(KnobKind k) {
    switch (k) {
        case KnobKind::IntegerRange: return "integer-range";
        case KnobKind::ContinuousRange: return "continuous-range";
        case KnobKind::Boolean: return "boolean";
        case KnobKind::Enumeration: return "enumeration";
    }
    return "?";
}

inline KnobKind knob_kind_from_string(const std::string& s) {
    if (s == "integer-range") return KnobKind::IntegerRange;
    if (s == "continuous-range") return KnobKind::ContinuousRange;
    if (s == "boolean") return KnobKind::Boolean;
    if (s == "enumeration") return KnobKind::Enumeration;
    throw std::invalid_argument("unknown knob kind: " + s);
}

using KnobValue = std::variant<bool, std::int64_t, double, std::string>;

//! One tunable parameter: name, domain, and a default that lies in it.
struct KnobSpec {
    std::string name;
    KnobKind kind = KnobKind::IntegerRange;
    double min = 0.0;                   // range kinds, inclusive
    double max = 0.0;
    std::vector<std::string> choices;   // enumeration kind
    KnobValue default_value;

    void check() const {
        if (name.empty()) throw std::invalid_argument("knob with empty name");
        switch (kind) {
            case KnobKind::IntegerRange:
            case KnobKind::ContinuousRange: {
                if (!(min < max)) throw std::invalid_argument(name + ": min must be < max");
                break;
            }
            case KnobKind::Boolean:
                if (!std::holds_alternative<bool>(default_value))
                    throw std::invalid_argument(name + ": boolean default required");
                break;
            case KnobKind::Enumeration: {
                if (choices.size() < 2)
                    throw std::invalid_argument(name + ": enumeration needs >= 2 choices");
                std::set<std::string> uniq(choices.begin(), choices.end());
                if (uniq.size() != choices.size())
                    throw std::invalid_argument(name + ": duplicate enumeration choices");
                break;
            }
        }
        if (!value_valid(default_value))
            throw std::invalid_argument(name + ": default outside domain");
    }

    bool value_valid(const KnobValue& v) const {
        switch (kind) {
            case KnobKind::IntegerRange: {
                const auto* p = std::get_if<std::int64_t>(&v);
                if (!p) return false;
                return static_cast<double>(*p) >= min && static_cast<double>(*p) <= max;
            }
            case KnobKind::ContinuousRange: {
                double x;
                if (const auto* pd = std::get_if<double>(&v)) x = *pd;
                else if (const auto* pi = std::get_if<std::int64_t>(&v)) x = static_cast<double>(*pi);
                else return false;
                return std::isfinite(x) && x >= min && x <= max;
            }
            case KnobKind::Boolean:
                return std::holds_alternative<bool>(v);
            case KnobKind::Enumeration: {
                const auto* p = std::get_if<std::string>(&v);
                if (!p) return false;
                return std::find(choices.begin(), choices.end(), *p) != choices.end();
            }
        }
        return false;
    }

    //! Affine map of a valid value onto [0,1]; enumeration index i -> i/(m-1).
    double encode_value(const KnobValue& v) const {
        switch (kind) {
            case KnobKind::IntegerRange:
                return (static_cast<double>(std::get<std::int64_t>(v)) - min) / (max - min);
            case KnobKind::ContinuousRange: {
                double x = std::holds_alternative<double>(v)
                               ? std::get<double>(v)
                               : static_cast<double>(std::get<std::int64_t>(v));
                return (x - min) / (max - min);
            }
            case KnobKind::Boolean:
                return std::get<bool>(v) ? 1.0 : 0.0;
            case KnobKind::Enumeration: {
                const auto& s = std::get<std::string>(v);
                auto it = std::find(choices.begin(), choices.end(), s);
                return static_cast<double>(it - choices.begin()) /
                       static_cast<double>(choices.size() - 1);
            }
        }
        return 0.0;
    }

    //! Inverse of encode_value: nearest grid value, ties toward min.
    KnobValue decode_unit(double u) const {
        u = std::clamp(u, 0.0, 1.0);
        switch (kind) {
            case KnobKind::IntegerRange: {
                double t = min + u * (max - min);
                // ceil(t - 0.5) rounds halves downward
                double r = std::ceil(t - 0.5);
                r = std::clamp(r, min, max);
                return static_cast<std::int64_t>(r);
            }
            case KnobKind::ContinuousRange:
                return min + u * (max - min);
            case KnobKind::Boolean:
                return u > 0.5;
            case KnobKind::Enumeration: {
                double t = u * static_cast<double>(choices.size() - 1);
                auto idx = static_cast<std::size_t>(
                    std::clamp(std::ceil(t - 0.5), 0.0, static_cast<double>(choices.size() - 1)));
                return choices[idx];
            }
        }
        return false;
    }

    //! Number of distinct values for discrete kinds; 0 for continuous.
    std::size_t grid_size() const {
        switch (kind) {
            case KnobKind::IntegerRange:
                return static_cast<std::size_t>(max - min) + 1;
            case KnobKind::ContinuousRange: return 0;
            case KnobKind::Boolean: return 2;
            case KnobKind::Enumeration: return choices.size();
        }
        return 0;
    }
};

//! Total assignment of values to every knob in a catalog.
struct Configuration {
    std::map<std::string, KnobValue> values;

    bool operator==(const Configuration& o) const { return values == o.values; }
    const KnobValue& at(const std::string& name) const {
        auto it = values.find(name);
        if (it == values.end()) throw std::out_of_range("no value for knob " + name);
        return it->second;
    }
};

//! The ordered universe of tunable knobs, with an optional prior ranking
//! (most-important first). Catalog order is the fallback ranking.
class KnobCatalog {
public:
    KnobCatalog() = default;
    explicit KnobCatalog(std::vector<KnobSpec> knobs,
                         std::optional<std::vector<std::string>> ranking = std::nullopt)
        : knobs_(std::move(knobs)), ranking_(std::move(ranking)) {
        for (std::size_t i = 0; i < knobs_.size(); ++i) {
            knobs_[i].check();
            if (!index_.emplace(knobs_[i].name, i).second)
                throw std::invalid_argument("duplicate knob name: " + knobs_[i].name);
        }
        if (ranking_) check_ranking(*ranking_);
    }

    const std::vector<KnobSpec>& knobs() const { return knobs_; }
    std::size_t size() const { return knobs_.size(); }

    const KnobSpec& operator[](std::size_t i) const { return knobs_[i]; }
    const KnobSpec& spec(const std::string& name) const { return knobs_[index_of(name)]; }

    bool contains(const std::string& name) const { return index_.count(name) != 0; }

    std::size_t index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw std::out_of_range("unknown knob: " + name);
        return it->second;
    }

    const std::optional<std::vector<std::string>>& ranking() const { return ranking_; }

    void set_ranking(std::vector<std::string> ranking) {
        check_ranking(ranking);
        ranking_ = std::move(ranking);
    }

    //! Ranking if present, catalog order otherwise.
    std::vector<std::string> effective_ranking() const {
        if (ranking_) return *ranking_;
        std::vector<std::string> names;
        names.reserve(knobs_.size());
        for (const auto& k : knobs_) names.push_back(k.name);
        return names;
    }

    Configuration default_config() const {
        Configuration c;
        for (const auto& k : knobs_) c.values[k.name] = k.default_value;
        return c;
    }

    //! Sorts a knob-name subset into catalog order, rejecting unknown names.
    std::vector<std::string> normalize_subset(const std::vector<std::string>& names) const {
        std::vector<std::size_t> idx;
        idx.reserve(names.size());
        for (const auto& n : names) idx.push_back(index_of(n));
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        std::vector<std::string> out;
        out.reserve(idx.size());
        for (auto i : idx) out.push_back(knobs_[i].name);
        return out;
    }

private:
    void check_ranking(const std::vector<std::string>& r) const {
        if (r.size() != knobs_.size())
            throw std::invalid_argument("ranking must be a permutation of knob names");
        std::set<std::string> seen;
        for (const auto& n : r) {
            if (!contains(n)) throw std::invalid_argument("ranking names unknown knob: " + n);
            if (!seen.insert(n).second)
                throw std::invalid_argument("ranking repeats knob: " + n);
        }
    }

    std::vector<KnobSpec> knobs_;
    std::optional<std::vector<std::string>> ranking_;
    std::unordered_map<std::string, std::size_t> index_;
};

//! Collects every invariant violation; violations are data, not failures.
inline std::vector<std::string> validate(const KnobCatalog& catalog, const Configuration& config) {
    std::vector<std::string> violations;
    for (const auto& [name, value] : config.values) {
        if (!catalog.contains(name)) {
            violations.push_back("unknown knob: " + name);
            continue;
        }
        if (!catalog.spec(name).value_valid(value))
            violations.push_back(name + ": value out of range");
    }
    for (const auto& k : catalog.knobs()) {
        if (config.values.find(k.name) == config.values.end())
            violations.push_back(k.name + ": missing assignment");
    }
    return violations;
}

//! One coordinate per subset knob, in catalog order, each in [0,1].
inline std::vector<double> encode(const KnobCatalog& catalog,
                                  const std::vector<std::string>& subset,
                                  const Configuration& config) {
    auto ordered = catalog.normalize_subset(subset);
    std::vector<double> x;
    x.reserve(ordered.size());
    for (const auto& name : ordered) {
        const auto& spec = catalog.spec(name);
        const auto& v = config.at(name);
        if (!spec.value_valid(v))
            throw std::invalid_argument("encode: invalid value for knob " + name);
        x.push_back(spec.encode_value(v));
    }
    return x;
}

// ---- JSON (de)serialization --------------------------------------------

inline nlohmann::json knob_value_to_json(const KnobValue& v) {
    return std::visit([](const auto& x) { return nlohmann::json(x); }, v);
}

inline KnobValue knob_value_from_json(const KnobSpec& spec, const nlohmann::json& j) {
    switch (spec.kind) {
        case KnobKind::IntegerRange:
            if (j.is_number_integer()) return j.get<std::int64_t>();
            if (j.is_number_float()) {
                double d = j.get<double>();
                if (d == std::floor(d)) return static_cast<std::int64_t>(d);
            }
            throw std::invalid_argument(spec.name + ": expected integer value");
        case KnobKind::ContinuousRange:
            if (j.is_number()) return j.get<double>();
            throw std::invalid_argument(spec.name + ": expected numeric value");
        case KnobKind::Boolean:
            if (j.is_boolean()) return j.get<bool>();
            throw std::invalid_argument(spec.name + ": expected boolean value");
        case KnobKind::Enumeration:
            if (j.is_string()) return j.get<std::string>();
            throw std::invalid_argument(spec.name + ": expected string value");
    }
    throw std::invalid_argument("bad knob kind");
}

inline nlohmann::json to_json(const KnobSpec& k) {
    nlohmann::json j{{"name", k.name}, {"kind", to_string(k.kind)}};
    if (k.kind == KnobKind::IntegerRange || k.kind == KnobKind::ContinuousRange) {
        j["min"] = k.kind == KnobKind::IntegerRange ? nlohmann::json(static_cast<std::int64_t>(k.min))
                                                    : nlohmann::json(k.min);
        j["max"] = k.kind == KnobKind::IntegerRange ? nlohmann::json(static_cast<std::int64_t>(k.max))
                                                    : nlohmann::json(k.max);
    }
    if (k.kind == KnobKind::Enumeration) j["choices"] = k.choices;
    j["default"] = knob_value_to_json(k.default_value);
    return j;
}

inline KnobSpec knob_spec_from_json(const nlohmann::json& j) {
    KnobSpec k;
    k.name = j.at("name").get<std::string>();
    k.kind = knob_kind_from_string(j.at("kind").get<std::string>());
    if (k.kind == KnobKind::IntegerRange || k.kind == KnobKind::ContinuousRange) {
        k.min = j.at("min").get<double>();
        k.max = j.at("max").get<double>();
    }
    if (k.kind == KnobKind::Enumeration) k.choices = j.at("choices").get<std::vector<std::string>>();
    k.default_value = knob_value_from_json(k, j.at("default"));
    k.check();
    return k;
}

//! Accepts either a bare array of knob objects or {"knobs": [...], "ranking": [...]}.
inline KnobCatalog catalog_from_json(const nlohmann::json& j) {
    const nlohmann::json* arr = nullptr;
    std::optional<std::vector<std::string>> ranking;
    if (j.is_array()) {
        arr = &j;
    } else if (j.is_object()) {
        arr = &j.at("knobs");
        if (j.contains("ranking")) ranking = j.at("ranking").get<std::vector<std::string>>();
    } else {
        throw std::invalid_argument("catalog document must be an array or object");
    }
    std::vector<KnobSpec> knobs;
    knobs.reserve(arr->size());
    for (const auto& item : *arr) knobs.push_back(knob_spec_from_json(item));
    return KnobCatalog(std::move(knobs), std::move(ranking));
}

inline nlohmann::json to_json(const KnobCatalog& c) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& k : c.knobs()) arr.push_back(to_json(k));
    nlohmann::json j{{"knobs", std::move(arr)}};
    if (c.ranking()) j["ranking"] = *c.ranking();
    return j;
}

inline nlohmann::json to_json(const Configuration& c) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, v] : c.values) j[name] = knob_value_to_json(v);
    return j;
}

inline Configuration configuration_from_json(const KnobCatalog& catalog, const nlohmann::json& j) {
    Configuration c;
    for (auto it = j.begin(); it != j.end(); ++it)
        c.values[it.key()] = knob_value_from_json(catalog.spec(it.key()), it.value());
    return c;
}

}  // namespace dotune
