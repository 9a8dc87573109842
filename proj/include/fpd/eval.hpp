#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpd/pipeline.hpp"

namespace fpd {

struct LabeledSample {
    std::string file;      // relative to the image root
    bool isPartial = false;
};

// CSV rows: filename,partial with partial in {0,1}. Verifies every referenced
// image exists and is readable; all offending rows/files are reported together.
std::vector<LabeledSample> load_labels(const std::string& csvPath, const std::string& imageRoot);

// Positive class = partial.
struct ConfusionMatrix {
    long long tp = 0;
    long long fp = 0;
    long long tn = 0;
    long long fn = 0;
    long long total() const { return tp + fp + tn + fn; }
};

// Each metric is defined only when its denominator is positive; undefined
// metrics stay empty (serialized as null), never coerced to 0 or 1.
struct Metrics {
    std::optional<double> sensitivity;  // tp / (tp + fn)
    std::optional<double> specificity;  // tn / (tn + fp)
    std::optional<double> accuracy;     // (tp + tn) / total
};

Metrics metrics(const ConfusionMatrix& cm);

struct SampleRecord {
    std::string file;
    bool label = false;
    bool predicted = false;
    Detection detection;
    std::string error;  // pipeline exception text; such samples count as partial
};

struct EvalOutcome {
    ConfusionMatrix matrix;
    std::vector<SampleRecord> records;  // input order, regardless of jobs
};

// Runs the full pipeline per sample; failures are recorded, never abort the
// batch. jobs > 1 distributes samples across threads.
EvalOutcome evaluate(const std::vector<LabeledSample>& samples, const std::string& imageRoot,
                     const PipelineConfig& cfg, int jobs = 1);

}  // namespace fpd
