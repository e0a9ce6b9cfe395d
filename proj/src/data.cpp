#include "fedauc/data.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "fedauc/errors.hpp"
#include "fedauc/rng.hpp"

namespace fedauc {

namespace {

bool parse_double(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    errno = 0;
    out = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    return end != begin && end && *end == '\0' && errno == 0;
}

}  // namespace

ScoreData ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open " + path);
    ScoreData data;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == "score,label") {
            if (line_no == 1) continue;
            throw ParseError(line_no, "unexpected header row");
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(line_no, "expected `score,label`, got: " + line);
        }
        double score = 0.0, label = 0.0;
        if (!parse_double(line.substr(0, comma), score) ||
            !parse_double(line.substr(comma + 1), label) || !std::isfinite(score)) {
            throw ParseError(line_no, "non-numeric row: " + line);
        }
        if (label != 0.0 && label != 1.0) {
            throw ParseError(line_no, "label must be 0 or 1, got: " + line);
        }
        double clamped_score = std::clamp(score, 0.0, 1.0);
        if (clamped_score != score) data.clamped += 1;
        data.scores.push_back(clamped_score);
        data.labels.push_back(label == 1.0 ? 1 : 0);
    }
    if (data.scores.empty()) throw EmptyInput("no samples in " + path);
    if (data.clamped > 0) {
        std::fprintf(stderr, "warning: clamped %ld score(s) to [0,1] while reading %s\n",
                     data.clamped, path.c_str());
    }
    return data;
}

ScoreData synth(long count, double pos_fraction, double separation, std::uint64_t seed) {
    if (count < 2) throw InvalidConfig("synthetic data needs at least 2 samples");
    if (!(pos_fraction > 0.0 && pos_fraction < 1.0)) {
        throw InvalidConfig("pos_fraction must lie strictly between 0 and 1");
    }
    auto rng = make_rng(seed, 0x5d47a);
    std::bernoulli_distribution pos(pos_fraction);
    std::normal_distribution<double> pos_score(0.5 + separation / 2.0, 0.15);
    std::normal_distribution<double> neg_score(0.5 - separation / 2.0, 0.15);
    ScoreData data;
    data.scores.reserve(static_cast<std::size_t>(count));
    data.labels.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        int label = pos(rng) ? 1 : 0;
        double score = label ? pos_score(rng) : neg_score(rng);
        data.scores.push_back(std::clamp(score, 0.0, 1.0));
        data.labels.push_back(label);
    }
    return data;
}

PartitionMode partition_mode_from_string(const std::string& name) {
    if (name == "uniform_random") return PartitionMode::uniform_random;
    if (name == "contiguous") return PartitionMode::contiguous;
    if (name == "label_skew") return PartitionMode::label_skew;
    throw InvalidConfig("unknown partition mode: " + name);
}

std::string to_string(PartitionMode mode) {
    switch (mode) {
        case PartitionMode::uniform_random: return "uniform_random";
        case PartitionMode::contiguous: return "contiguous";
        case PartitionMode::label_skew: return "label_skew";
    }
    return "unknown";
}

std::vector<LocalDataset> partition(const ScoreData& data, int n_parties,
                                    const PartitionSpec& spec) {
    if (n_parties < 2) throw InvalidConfig("partitioning needs at least 2 parties");
    const auto n = static_cast<long>(data.scores.size());
    if (n < n_parties) throw InvalidConfig("fewer samples than parties");

    std::vector<LocalDataset> parts(static_cast<std::size_t>(n_parties));
    for (int m = 0; m < n_parties; ++m) parts[static_cast<std::size_t>(m)].party_id = m;
    auto rng = make_rng(spec.seed, 0x9a47);

    auto assign = [&](long i, int party) {
        parts[static_cast<std::size_t>(party)].samples.push_back(
            Sample{data.scores[static_cast<std::size_t>(i)],
                   data.labels[static_cast<std::size_t>(i)]});
    };

    switch (spec.mode) {
        case PartitionMode::contiguous: {
            for (long i = 0; i < n; ++i) {
                assign(i, static_cast<int>(i * n_parties / n));
            }
            break;
        }
        case PartitionMode::uniform_random: {
            std::uniform_int_distribution<int> party(0, n_parties - 1);
            for (long i = 0; i < n; ++i) assign(i, party(rng));
            break;
        }
        case PartitionMode::label_skew: {
            double alpha = std::max(spec.alpha, 1e-3);
            std::gamma_distribution<double> gamma(alpha, 1.0);
            std::vector<std::vector<double>> weights(2, std::vector<double>(
                                                            static_cast<std::size_t>(n_parties)));
            for (int cls = 0; cls < 2; ++cls) {
                double total = 0.0;
                for (int m = 0; m < n_parties; ++m) {
                    double w = gamma(rng);
                    weights[static_cast<std::size_t>(cls)][static_cast<std::size_t>(m)] = w;
                    total += w;
                }
                if (total <= 0.0) {
                    weights[static_cast<std::size_t>(cls)].assign(
                        static_cast<std::size_t>(n_parties), 1.0);
                    total = n_parties;
                }
                for (double& w : weights[static_cast<std::size_t>(cls)]) w /= total;
            }
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (long i = 0; i < n; ++i) {
                const auto& w = weights[static_cast<std::size_t>(
                    data.labels[static_cast<std::size_t>(i)])];
                double r = u(rng), acc = 0.0;
                int party = n_parties - 1;
                for (int m = 0; m < n_parties; ++m) {
                    acc += w[static_cast<std::size_t>(m)];
                    if (r < acc) {
                        party = m;
                        break;
                    }
                }
                assign(i, party);
            }
            break;
        }
    }

    // every participating party must end up non-empty
    for (auto& part : parts) {
        while (part.samples.empty()) {
            auto donor = std::max_element(parts.begin(), parts.end(),
                                          [](const LocalDataset& a, const LocalDataset& b) {
                                              return a.samples.size() < b.samples.size();
                                          });
            if (donor->samples.size() <= 1) throw InvalidConfig("not enough samples to cover parties");
            part.samples.push_back(donor->samples.back());
            donor->samples.pop_back();
        }
    }
    return parts;
}

void write_score_csv(const std::string& path, const ScoreData& data) {
    std::ofstream out(path);
    if (!out) throw ParseError(0, "cannot write " + path);
    out << "score,label\n";
    char buf[64];
    for (std::size_t i = 0; i < data.scores.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%d\n", data.scores[i], data.labels[i]);
        out << buf;
    }
}

}  // namespace fedauc
