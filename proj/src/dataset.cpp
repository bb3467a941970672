#include "cfswarm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "cfswarm/errors.hpp"
#include "cfswarm/rng.hpp"
#include "cfswarm/text.hpp"

namespace cfswarm {

double median(std::span<const double> values) {
    if (values.empty()) throw UsageError("median of empty list");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mad(std::span<const double> values) {
    if (values.empty()) throw UsageError("mad of empty list");
    const double med = median(values);
    std::vector<double> dev;
    dev.reserve(values.size());
    for (double v : values) dev.push_back(std::abs(v - med));
    return median(dev);
}

namespace {

double scale_value(double v, const FeatureStats& s) {
    const double range = s.max - s.min;
    return range > 0.0 ? (v - s.min) / range : 0.0;
}

struct SplitIndices {
    std::vector<std::size_t> train, test;
};

SplitIndices make_split(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    RngStream rng = RngStream::derive(seed, {stream_id::kSplitShuffle});
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.uniform_index(i);
        std::swap(idx[i - 1], idx[j]);
    }
    const std::size_t n_train = n * 8 / 10;
    SplitIndices s;
    s.train.assign(idx.begin(), idx.begin() + n_train);
    s.test.assign(idx.begin() + n_train, idx.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

} // namespace

Dataset build_dataset(FeatureSchema schema, const std::vector<DecodedRow>& raw,
                      std::vector<int> labels, std::uint64_t seed) {
    const std::size_t n = raw.size();
    if (n != labels.size())
        throw UsageError("build_dataset: rows and labels differ in length");
    if (n < 2) throw UsageError("build_dataset: need at least 2 rows");

    auto split = make_split(n, seed);

    const std::size_t p = schema.n_features();
    std::vector<FeatureStats> stats(p);
    for (std::size_t j = 0; j < p; ++j) {
        if (schema.feature(j).kind != FeatureKind::Continuous) continue;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t i : split.train) {
            const double v = std::get<double>(raw[i][j]);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        stats[j].min = lo;
        stats[j].max = hi;
        stats[j].range = 1.0; // scaled train range; constant features fall back to 1
    }

    Dataset d{std::move(schema), {}, std::move(labels), std::move(split.train),
              std::move(split.test), std::move(stats), 0};

    std::vector<char> in_train(n, 0);
    for (std::size_t i : d.train_idx) in_train[i] = 1;

    d.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> enc = encode_row(raw[i], d.schema, d.stats);
        if (!in_train[i]) {
            for (std::size_t j = 0; j < d.schema.n_features(); ++j) {
                if (d.schema.feature(j).kind != FeatureKind::Continuous) continue;
                double& v = enc[d.schema.block_offset(j)];
                if (v < 0.0 || v > 1.0) {
                    v = std::clamp(v, 0.0, 1.0);
                    ++d.clamped_cells;
                }
            }
        }
        d.rows.push_back(std::move(enc));
    }

    // MAD per continuous feature over train rows, in scaled units.
    for (std::size_t j = 0; j < d.schema.n_features(); ++j) {
        if (d.schema.feature(j).kind != FeatureKind::Continuous) continue;
        std::vector<double> col;
        col.reserve(d.train_idx.size());
        const std::size_t off = d.schema.block_offset(j);
        for (std::size_t i : d.train_idx) col.push_back(d.rows[i][off]);
        d.stats[j].mad = mad(col);
    }
    return d;
}

std::vector<double> encode_row(const DecodedRow& row, const FeatureSchema& schema,
                               const std::vector<FeatureStats>& stats) {
    if (row.size() != schema.n_features())
        throw UsageError("encode_row: wrong feature count");
    std::vector<double> out(schema.encoded_width(), 0.0);
    for (std::size_t j = 0; j < schema.n_features(); ++j) {
        const auto& f = schema.feature(j);
        const std::size_t off = schema.block_offset(j);
        if (f.kind == FeatureKind::Continuous) {
            out[off] = scale_value(std::get<double>(row[j]), stats[j]);
        } else {
            const auto& name = std::get<std::string>(row[j]);
            const auto it = std::find(f.levels.begin(), f.levels.end(), name);
            if (it == f.levels.end())
                throw UnseenLevelError("unseen level '" + name + "' for feature '" +
                                       f.name + "'");
            out[off + static_cast<std::size_t>(it - f.levels.begin())] = 1.0;
        }
    }
    return out;
}

DecodedRow decode_row(std::span<const double> x, const FeatureSchema& schema,
                      const std::vector<FeatureStats>& stats) {
    if (x.size() != schema.encoded_width())
        throw UsageError("decode_row: wrong encoded width");
    DecodedRow out;
    out.reserve(schema.n_features());
    for (std::size_t j = 0; j < schema.n_features(); ++j) {
        const auto& f = schema.feature(j);
        const std::size_t off = schema.block_offset(j);
        if (f.kind == FeatureKind::Continuous) {
            out.emplace_back(stats[j].min + x[off] * (stats[j].max - stats[j].min));
        } else {
            std::size_t ones = 0, level = 0;
            for (std::size_t c = 0; c < f.levels.size(); ++c) {
                const double v = x[off + c];
                if (std::abs(v - 1.0) < 1e-9) {
                    ++ones;
                    level = c;
                } else if (std::abs(v) > 1e-9) {
                    throw InternalError("block of feature '" + f.name +
                                        "' is not one-hot");
                }
            }
            if (ones != 1)
                throw InternalError("block of feature '" + f.name +
                                    "' is not one-hot");
            out.emplace_back(f.levels[level]);
        }
    }
    return out;
}

std::size_t level_of(std::span<const double> x, const FeatureSchema& schema,
                     std::size_t feature) {
    const auto& f = schema.feature(feature);
    if (f.kind != FeatureKind::Categorical)
        throw UsageError("level_of on continuous feature '" + f.name + "'");
    const std::size_t off = schema.block_offset(feature);
    std::size_t best = 0;
    for (std::size_t c = 1; c < f.levels.size(); ++c)
        if (x[off + c] > x[off + best]) best = c;
    return best;
}

QueryPoint make_query(const Dataset& data, std::size_t row, int original_class,
                      int desired_class) {
    if (row >= data.n_rows()) throw UsageError("query row out of range");
    if (original_class == desired_class)
        throw UsageError("desired class must differ from the original class");
    return QueryPoint{data.rows[row], original_class, desired_class};
}

Dataset load_csv(const std::string& csv_path, const std::string& schema_path,
                 std::uint64_t seed) {
    FeatureSchema schema = FeatureSchema::load(schema_path);

    std::ifstream in(csv_path);
    if (!in) throw UsageError("cannot open csv file: " + csv_path);

    std::string line;
    if (!std::getline(in, line))
        throw SchemaViolation("csv file is empty: " + csv_path);
    const auto header = split_csv_line(line);

    std::unordered_map<std::string, std::size_t> col_of;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (!col_of.emplace(header[c], c).second)
            throw SchemaViolation("duplicate csv column '" + header[c] + "'");
    }

    std::vector<std::size_t> feature_col(schema.n_features());
    for (std::size_t j = 0; j < schema.n_features(); ++j) {
        const auto it = col_of.find(schema.feature(j).name);
        if (it == col_of.end())
            throw MissingColumnError("missing column '" + schema.feature(j).name +
                                     "' in " + csv_path);
        feature_col[j] = it->second;
    }
    const auto label_it = col_of.find("label");
    if (label_it == col_of.end())
        throw MissingColumnError("missing column 'label' in " + csv_path);
    const std::size_t label_col = label_it->second;
    if (header.size() != schema.n_features() + 1) {
        for (const auto& [name, c] : col_of) {
            if (name != "label" && !schema.index_of(name))
                throw SchemaViolation("column '" + name + "' not in schema");
        }
    }

    std::vector<DecodedRow> raw;
    std::vector<int> labels;
    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row_no;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw SchemaViolation("row " + std::to_string(row_no) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(header.size()));
        DecodedRow row;
        row.reserve(schema.n_features());
        for (std::size_t j = 0; j < schema.n_features(); ++j) {
            const auto& f = schema.feature(j);
            const std::string& cell = cells[feature_col[j]];
            if (f.kind == FeatureKind::Continuous) {
                double v;
                if (!parse_double(cell, v))
                    throw NonNumericValueError("non-numeric value '" + cell +
                                               "' for feature '" + f.name +
                                               "' at row " + std::to_string(row_no));
                row.emplace_back(v);
            } else {
                if (std::find(f.levels.begin(), f.levels.end(), cell) == f.levels.end())
                    throw UnseenLevelError("unseen level '" + cell + "' for feature '" +
                                           f.name + "' at row " + std::to_string(row_no));
                row.emplace_back(cell);
            }
        }
        const std::string& lab = cells[label_col];
        if (lab == "0") {
            labels.push_back(0);
        } else if (lab == "1") {
            labels.push_back(1);
        } else {
            throw NonBinaryLabelError("non-binary label '" + lab + "' at row " +
                                      std::to_string(row_no));
        }
        raw.push_back(std::move(row));
    }
    return build_dataset(std::move(schema), raw, std::move(labels), seed);
}

Dataset synth_dataset(std::uint64_t seed, std::size_t n, std::size_t n_cont,
                      std::size_t n_cat, double separation) {
    if (n < 20) throw UsageError("synth_dataset: n must be >= 20");
    if (n_cont == 0) throw UsageError("synth_dataset: need at least 1 continuous feature");

    std::vector<FeatureSpec> specs;
    for (std::size_t j = 0; j < n_cont; ++j)
        specs.push_back({"num" + std::to_string(j), FeatureKind::Continuous, {}, true});
    const std::vector<std::string> levels = {"A", "B", "C"};
    for (std::size_t j = 0; j < n_cat; ++j)
        specs.push_back({"cat" + std::to_string(j), FeatureKind::Categorical, levels, true});
    FeatureSchema schema(std::move(specs));

    const double shift = separation / std::sqrt(static_cast<double>(n_cont));
    // Categorical class-correlation fades with separation so that a
    // separation of zero yields a fully uninformative dataset.
    const double corr = 0.75 * std::clamp(separation / 4.0, 0.0, 1.0);

    std::vector<DecodedRow> raw;
    std::vector<int> labels;
    raw.reserve(n);
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int label = static_cast<int>(i % 2);
        RngStream rng = RngStream::derive(seed, {stream_id::kSynthRow, i});
        DecodedRow row;
        row.reserve(schema.n_features());
        for (std::size_t j = 0; j < n_cont; ++j)
            row.emplace_back(rng.normal() + (label == 1 ? shift : 0.0));
        for (std::size_t j = 0; j < n_cat; ++j) {
            if (rng.uniform() < corr) {
                row.emplace_back(levels[static_cast<std::size_t>(label)]);
            } else {
                row.emplace_back(levels[rng.uniform_index(levels.size())]);
            }
        }
        raw.push_back(std::move(row));
        labels.push_back(label);
    }
    return build_dataset(std::move(schema), raw, std::move(labels), seed);
}

nlohmann::json Dataset::to_json() const {
    nlohmann::json j;
    j["format"] = "cfswarm.dataset";
    j["version"] = 1;
    j["schema"] = schema.to_json();
    j["rows"] = rows;
    j["labels"] = labels;
    j["train_idx"] = train_idx;
    j["test_idx"] = test_idx;
    nlohmann::json js = nlohmann::json::array();
    for (std::size_t i = 0; i < stats.size(); ++i) {
        if (schema.feature(i).kind == FeatureKind::Continuous) {
            js.push_back({{"min", stats[i].min},
                          {"max", stats[i].max},
                          {"mad", stats[i].mad},
                          {"range", stats[i].range}});
        } else {
            js.push_back(nullptr);
        }
    }
    j["stats"] = std::move(js);
    j["clamped_cells"] = clamped_cells;
    return j;
}

Dataset Dataset::from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "cfswarm.dataset")
        throw ConfigError("not a cfswarm dataset artifact");
    if (j.value("version", 0) != 1)
        throw ConfigError("unsupported dataset artifact version");
    FeatureSchema schema = FeatureSchema::from_json(j.at("schema"));
    Dataset d{std::move(schema),
              j.at("rows").get<std::vector<std::vector<double>>>(),
              j.at("labels").get<std::vector<int>>(),
              j.at("train_idx").get<std::vector<std::size_t>>(),
              j.at("test_idx").get<std::vector<std::size_t>>(),
              {},
              j.value("clamped_cells", std::size_t{0})};
    const auto& js = j.at("stats");
    d.stats.resize(js.size());
    for (std::size_t i = 0; i < js.size(); ++i) {
        if (js[i].is_null()) continue;
        d.stats[i] = FeatureStats{js[i].at("min").get<double>(),
                                  js[i].at("max").get<double>(),
                                  js[i].at("mad").get<double>(),
                                  js[i].at("range").get<double>()};
    }
    return d;
}

void Dataset::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write dataset artifact: " + path);
    out << to_json().dump(1) << "\n";
}

Dataset Dataset::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open dataset artifact: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("dataset artifact " + path + ": " + e.what());
    }
    return from_json(j);
}

} // namespace cfswarm
