#pragma once

// Feature vectors for the classifiers: the nine profile attributes (age is
// numeric, the rest categorical after canonicalization), optionally followed
// by exposure counts for synthetic-recovery experiments. Missing is a
// first-class value, never a sentinel.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "privlens/labeling.hpp"
#include "privlens/model.hpp"

namespace privlens {

enum class FeatureKind { Numeric, Categorical };

struct FeatureSpec {
    std::string name;
    FeatureKind kind;

    bool operator==(const FeatureSpec&) const = default;
};

class FeatureValue {
public:
    static FeatureValue missing() { return FeatureValue(); }
    static FeatureValue number(double v) {
        FeatureValue f;
        f.kind_ = Kind::Number;
        f.number_ = v;
        return f;
    }
    static FeatureValue category(std::string v) {
        FeatureValue f;
        f.kind_ = Kind::Category;
        f.category_ = std::move(v);
        return f;
    }

    bool is_missing() const { return kind_ == Kind::Missing; }
    bool is_number() const { return kind_ == Kind::Number; }
    bool is_category() const { return kind_ == Kind::Category; }
    double as_number() const { return number_; }
    const std::string& as_category() const { return category_; }

    bool operator==(const FeatureValue& other) const {
        if (kind_ != other.kind_) return false;
        switch (kind_) {
            case Kind::Missing: return true;
            case Kind::Number: return number_ == other.number_;
            case Kind::Category: return category_ == other.category_;
        }
        return false;
    }

private:
    enum class Kind { Missing, Number, Category };
    Kind kind_ = Kind::Missing;
    double number_ = 0.0;
    std::string category_;
};

using FeatureVector = std::vector<FeatureValue>;

struct FeatureSchema {
    std::vector<FeatureSpec> attributes;

    std::size_t size() const { return attributes.size(); }
    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < attributes.size(); ++i)
            if (attributes[i].name == name) return i;
        return std::nullopt;
    }

    bool operator==(const FeatureSchema&) const = default;
};

struct LabeledExample {
    FeatureVector features;
    Category label;
};

struct LabeledDataset {
    Scheme scheme = Scheme::SevenClass;
    FeatureSchema schema;
    std::vector<LabeledExample> examples;

    std::size_t size() const { return examples.size(); }
};

inline constexpr std::array<std::string_view, 3> kExposureFeatureNames = {"n_faces", "n_tags",
                                                                          "n_photos"};

// Schema over a subset of profile attribute names, optionally extended with
// the numeric exposure counts. Unknown names are rejected.
inline FeatureSchema make_schema(std::span<const std::string> attribute_names,
                                 bool with_exposure = false) {
    FeatureSchema schema;
    for (const std::string& name : attribute_names) {
        bool known = false;
        for (std::string_view known_name : kProfileAttributeNames)
            if (name == known_name) known = true;
        if (!known)
            throw std::invalid_argument("make_schema: unknown profile attribute '" + name + "'");
        schema.attributes.push_back(
            {name, name == "age" ? FeatureKind::Numeric : FeatureKind::Categorical});
    }
    if (with_exposure)
        for (std::string_view name : kExposureFeatureNames)
            schema.attributes.push_back({std::string(name), FeatureKind::Numeric});
    return schema;
}

inline FeatureSchema make_full_schema(bool with_exposure = false) {
    std::vector<std::string> names(kProfileAttributeNames.begin(), kProfileAttributeNames.end());
    return make_schema(names, with_exposure);
}

// Extracts the schema's attributes from one user. Exposure-derived features
// require the caller to pass the user's computed exposure.
inline FeatureVector extract_features(const UserRecord& user, const FeatureSchema& schema,
                                      const UserExposure* exposure = nullptr) {
    FeatureVector out;
    out.reserve(schema.size());
    for (const FeatureSpec& spec : schema.attributes) {
        if (spec.name == "age") {
            out.push_back(user.profile.age ? FeatureValue::number(*user.profile.age)
                                           : FeatureValue::missing());
            continue;
        }
        if (spec.name == "n_faces" || spec.name == "n_tags" || spec.name == "n_photos") {
            if (exposure == nullptr)
                throw std::invalid_argument("extract_features: exposure features requested "
                                            "without an exposure");
            const std::size_t v = spec.name == "n_faces"   ? exposure->n_faces
                                  : spec.name == "n_tags"  ? exposure->n_tags
                                                           : exposure->n_photos;
            out.push_back(FeatureValue::number(static_cast<double>(v)));
            continue;
        }
        const auto* value = user.profile.categorical(spec.name);
        out.push_back(value && *value ? FeatureValue::category(**value)
                                      : FeatureValue::missing());
    }
    return out;
}

}  // namespace privlens
