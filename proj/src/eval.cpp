#include "fpd/eval.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "fpd/imageio.hpp"

namespace fpd {

namespace fs = std::filesystem;

std::vector<LabeledSample> load_labels(const std::string& csvPath, const std::string& imageRoot) {
    std::ifstream in(csvPath);
    if (!in) throw IoError("cannot open labels file " + csvPath);

    std::vector<LabeledSample> samples;
    std::vector<std::string> offenders;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        const std::string name = comma == std::string::npos ? "" : line.substr(0, comma);
        const std::string flag = comma == std::string::npos ? "" : line.substr(comma + 1);
        if (name.empty() || (flag != "0" && flag != "1")) {
            offenders.push_back("row " + std::to_string(row) + ": malformed: " + line);
            continue;
        }
        const fs::path full = fs::path(imageRoot) / name;
        std::error_code ec;
        if (!fs::is_regular_file(full, ec)) {
            offenders.push_back("row " + std::to_string(row) + ": missing image: " + name);
            continue;
        }
        std::ifstream probe(full, std::ios::binary);
        if (!probe || probe.peek() == std::ifstream::traits_type::eof()) {
            offenders.push_back("row " + std::to_string(row) + ": unreadable image: " + name);
            continue;
        }
        samples.push_back({name, flag == "1"});
    }
    if (!offenders.empty()) {
        std::ostringstream msg;
        msg << "label ingestion failed (" << offenders.size() << " problem"
            << (offenders.size() == 1 ? "" : "s") << ")";
        for (const auto& o : offenders) msg << "\n  " << o;
        throw IngestionError(msg.str(), offenders);
    }
    return samples;
}

Metrics metrics(const ConfusionMatrix& cm) {
    if (cm.tp < 0 || cm.fp < 0 || cm.tn < 0 || cm.fn < 0)
        throw InvalidInput("metrics: negative cell");
    if (cm.total() == 0) throw InvalidInput("metrics: empty matrix");
    Metrics m;
    if (cm.tp + cm.fn > 0) m.sensitivity = static_cast<double>(cm.tp) / (cm.tp + cm.fn);
    if (cm.tn + cm.fp > 0) m.specificity = static_cast<double>(cm.tn) / (cm.tn + cm.fp);
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / cm.total();
    return m;
}

EvalOutcome evaluate(const std::vector<LabeledSample>& samples, const std::string& imageRoot,
                     const PipelineConfig& cfg, int jobs) {
    if (samples.empty()) throw EmptyDataset("evaluate: no samples");
    validate(cfg);
    if (jobs < 1) jobs = 1;
    jobs = std::min<int>(jobs, static_cast<int>(samples.size()));

    EvalOutcome out;
    out.records.resize(samples.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= samples.size()) break;
            SampleRecord& rec = out.records[i];
            rec.file = samples[i].file;
            rec.label = samples[i].isPartial;
            try {
                const GrayImage img = load_image((fs::path(imageRoot) / samples[i].file).string());
                rec.detection = run_detection(img, cfg);
                rec.predicted = rec.detection.partiality.isPartial;
            } catch (const std::exception& e) {
                // A sample the pipeline cannot process is a capture to redo.
                rec.error = e.what();
                rec.predicted = true;
                rec.detection.partiality.threshold = cfg.T;
                rec.detection.partiality.isPartial = true;
                rec.detection.diagnostic = "pipeline-error";
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const auto& rec : out.records) {
        if (rec.label)
            (rec.predicted ? out.matrix.tp : out.matrix.fn) += 1;
        else
            (rec.predicted ? out.matrix.fp : out.matrix.tn) += 1;
    }
    return out;
}

}  // namespace fpd
