#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqaudit/core/types.hpp"

namespace seqaudit {

// Provenance of a sequence with respect to the audited model's training set.
enum class Label : std::uint8_t {
    kNone = 0,                  // training/validation material, not under audit
    kMemberCopyrighted = 1,     // in D_c: copyrighted and seen in training
    kNonmemberCopyrighted = 2,  // in D_nc: copyrighted but never trained on
};

inline const char* label_name(Label l) {
    switch (l) {
        case Label::kMemberCopyrighted: return "member";
        case Label::kNonmemberCopyrighted: return "nonmember";
        default: return "none";
    }
}

// One windowed sequence split into its prompt segment (key) and target
// segment (value).
struct SequenceSample {
    MatX key;    // [T_k x F]
    MatX value;  // [T_v x F]
    Label label = Label::kNone;
    std::int32_t pattern_id = -1;
    std::int64_t sample_id = -1;
};

// Per-feature affine normalization: fitted on the training split only,
// applied everywhere. shift is the feature mean, scale the population
// standard deviation (1.0 for features with no spread).
struct Scaler {
    VecX shift;
    VecX scale;

    Eigen::Index features() const { return shift.size(); }

    MatX apply(const MatX& x) const {
        MatX out = x;
        for (Eigen::Index c = 0; c < out.cols(); ++c)
            out.col(c) = (out.col(c).array() - shift[c]) / scale[c];
        return out;
    }
    MatX invert(const MatX& x) const {
        MatX out = x;
        for (Eigen::Index c = 0; c < out.cols(); ++c)
            out.col(c) = out.col(c).array() * scale[c] + shift[c];
        return out;
    }
};

// Fit over the concatenated key and value rows of the given samples.
inline Scaler fit_scaler(std::span<const SequenceSample> samples) {
    if (samples.empty()) throw std::invalid_argument("fit_scaler: no samples");
    const Eigen::Index f = samples.front().key.cols();
    VecX sum = VecX::Zero(f), sumsq = VecX::Zero(f);
    double n = 0.0;
    for (const auto& s : samples) {
        for (const MatX* m : {&s.key, &s.value}) {
            if (m->cols() != f) throw std::invalid_argument("fit_scaler: ragged feature count");
            sum += m->colwise().sum().transpose();
            sumsq += m->array().square().matrix().colwise().sum().transpose();
            n += static_cast<double>(m->rows());
        }
    }
    Scaler sc;
    sc.shift = sum / n;
    sc.scale = VecX::Ones(f);
    for (Eigen::Index c = 0; c < f; ++c) {
        const double var = sumsq[c] / n - sc.shift[c] * sc.shift[c];
        if (var > 1e-24) sc.scale[c] = std::sqrt(var);
    }
    return sc;
}

struct BundleMeta {
    std::string source;          // "synthetic" | "csv"
    std::uint64_t seed = 0;
    bool overlap = false;
    int features = 0;
    int seq_len = 0;   // key_len + value_len
    int key_len = 0;
    int value_len = 0;
    nlohmann::json extra;  // generator-specific parameters

    nlohmann::json to_json() const {
        return nlohmann::json{{"source", source},   {"seed", seed},
                              {"overlap", overlap}, {"features", features},
                              {"seq_len", seq_len}, {"key_len", key_len},
                              {"value_len", value_len}, {"extra", extra}};
    }
    static BundleMeta from_json(const nlohmann::json& j) {
        BundleMeta m;
        m.source = j.at("source").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.overlap = j.at("overlap").get<bool>();
        m.features = j.at("features").get<int>();
        m.seq_len = j.at("seq_len").get<int>();
        m.key_len = j.at("key_len").get<int>();
        m.value_len = j.at("value_len").get<int>();
        m.extra = j.value("extra", nlohmann::json::object());
        return m;
    }
};

// The four evaluation splits. D_c is stored as sample ids referencing d_tr,
// which makes the subset invariant structural rather than checked.
struct DatasetBundle {
    std::vector<SequenceSample> d_tr;
    std::vector<SequenceSample> d_v;
    std::vector<SequenceSample> d_nc;
    std::vector<std::int64_t> d_c_ids;  // ascending, subset of d_tr ids
    Scaler scaler;
    BundleMeta meta;

    // Members of D_c, as pointers into d_tr (in d_tr order).
    std::vector<const SequenceSample*> d_c() const {
        std::vector<const SequenceSample*> out;
        out.reserve(d_c_ids.size());
        for (const auto& s : d_tr)
            if (std::binary_search(d_c_ids.begin(), d_c_ids.end(), s.sample_id))
                out.push_back(&s);
        if (out.size() != d_c_ids.size())
            throw std::logic_error("bundle: d_c ids are not a subset of d_tr");
        return out;
    }

    // The audited set D2 = D_c followed by D_nc.
    std::vector<const SequenceSample*> d2() const {
        auto out = d_c();
        out.reserve(out.size() + d_nc.size());
        for (const auto& s : d_nc) out.push_back(&s);
        return out;
    }

    void validate() const;
};

inline void DatasetBundle::validate() const {
    auto check_split = [&](const std::vector<SequenceSample>& split, const char* name) {
        for (const auto& s : split) {
            if (s.key.rows() != meta.key_len || s.value.rows() != meta.value_len ||
                s.key.cols() != meta.features || s.value.cols() != meta.features)
                throw std::invalid_argument(std::string("bundle: bad shapes in ") + name);
            if (!s.key.allFinite() || !s.value.allFinite())
                throw std::invalid_argument(std::string("bundle: non-finite data in ") + name);
        }
    };
    check_split(d_tr, "d_tr");
    check_split(d_v, "d_v");
    check_split(d_nc, "d_nc");
    if (meta.key_len + meta.value_len != meta.seq_len)
        throw std::invalid_argument("bundle: key_len + value_len != seq_len");
    if ((scaler.scale.array() <= 0.0).any())
        throw std::invalid_argument("bundle: scaler scale must be positive");

    // Label discipline: members only in d_tr (exactly the d_c ids), d_nc all
    // nonmember, d_v unlabeled.
    std::size_t members = 0;
    for (const auto& s : d_tr) {
        const bool in_dc =
            std::binary_search(d_c_ids.begin(), d_c_ids.end(), s.sample_id);
        if (in_dc) {
            ++members;
            if (s.label != Label::kMemberCopyrighted)
                throw std::invalid_argument("bundle: d_c sample missing member label");
        } else if (s.label != Label::kNone) {
            throw std::invalid_argument("bundle: non-d_c training sample must be unlabeled");
        }
    }
    if (members != d_c_ids.size())
        throw std::invalid_argument("bundle: d_c ids not found in d_tr");
    for (const auto& s : d_v)
        if (s.label != Label::kNone)
            throw std::invalid_argument("bundle: validation samples must be unlabeled");
    for (const auto& s : d_nc)
        if (s.label != Label::kNonmemberCopyrighted)
            throw std::invalid_argument("bundle: d_nc sample missing nonmember label");
}

}  // namespace seqaudit
