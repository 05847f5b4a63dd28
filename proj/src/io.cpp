#include "gridtop/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "gridtop/errors.hpp"

namespace gridtop::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    return in;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return tokens;
}

// key=value pair; the value may not contain whitespace.
std::pair<std::string, std::string> split_kv(const std::string& token, const std::string& path,
                                             long line) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ParseError(path, line, "expected key=value, got '" + token + "'");
    return {token.substr(0, eq), token.substr(eq + 1)};
}

double parse_double(const std::string& text, const std::string& path, long line) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ParseError(path, line, "not a number: '" + text + "'");
    return v;
}

long parse_long(const std::string& text, const std::string& path, long line) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(path, line, "not an integer: '" + text + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& path, long line) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(path, line, "not an unsigned integer: '" + text + "'");
    return v;
}

}  // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// ---- topology files ---------------------------------------------------------

void write_topology(const std::filesystem::path& path, const TopologyDocument& doc) {
    auto out = open_out(path);
    out << "# gridtop topology v1\n";
    for (const auto& node : doc.nodes)
        out << "node id=" << node.id << " name=" << node.name << " role=" << to_string(node.role)
            << " layer=" << node.layer << "\n";
    for (const auto& edge : doc.edges)
        out << "edge parent=" << edge.parent << " child=" << edge.child << "\n";
}

void write_topology(const std::filesystem::path& path, const LayeredNetwork& net) {
    write_topology(path, TopologyDocument{net.nodes(), net.edges()});
}

TopologyDocument read_topology_document(const std::filesystem::path& path) {
    auto in = open_in(path);
    const std::string name = path.string();
    TopologyDocument doc;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (tokens[0] == "node") {
            NodeInfo node;
            bool have_id = false, have_layer = false;
            for (std::size_t t = 1; t < tokens.size(); ++t) {
                const auto [key, value] = split_kv(tokens[t], name, line_no);
                if (key == "id") {
                    node.id = static_cast<NodeId>(parse_long(value, name, line_no));
                    have_id = true;
                } else if (key == "name") {
                    node.name = value;
                } else if (key == "role") {
                    try {
                        node.role = role_from_string(value);
                    } catch (const Error&) {
                        throw ParseError(name, line_no, "unknown role '" + value + "'");
                    }
                } else if (key == "layer") {
                    node.layer = static_cast<int>(parse_long(value, name, line_no));
                    have_layer = true;
                } else {
                    throw ParseError(name, line_no, "unknown node field '" + key + "'");
                }
            }
            if (!have_id || !have_layer)
                throw ParseError(name, line_no, "node needs at least id= and layer=");
            doc.nodes.push_back(std::move(node));
        } else if (tokens[0] == "edge") {
            Edge edge;
            bool have_parent = false, have_child = false;
            for (std::size_t t = 1; t < tokens.size(); ++t) {
                const auto [key, value] = split_kv(tokens[t], name, line_no);
                if (key == "parent") {
                    edge.parent = static_cast<NodeId>(parse_long(value, name, line_no));
                    have_parent = true;
                } else if (key == "child") {
                    edge.child = static_cast<NodeId>(parse_long(value, name, line_no));
                    have_child = true;
                } else {
                    throw ParseError(name, line_no, "unknown edge field '" + key + "'");
                }
            }
            if (!have_parent || !have_child)
                throw ParseError(name, line_no, "edge needs parent= and child=");
            doc.edges.push_back(edge);
        } else {
            throw ParseError(name, line_no, "expected 'node' or 'edge', got '" + tokens[0] + "'");
        }
    }
    return doc;
}

LayeredNetwork read_topology(const std::filesystem::path& path) {
    TopologyDocument doc = read_topology_document(path);
    return LayeredNetwork(std::move(doc.nodes), std::move(doc.edges));
}

// ---- readings files ---------------------------------------------------------

void write_readings(const std::filesystem::path& path, const ReadingsMatrix& readings,
                    Orientation orientation) {
    auto out = open_out(path);
    const auto& values = readings.values();
    if (orientation == Orientation::Auto) orientation = Orientation::IntervalsAsRows;
    out << "# gridtop readings v1 orientation="
        << (orientation == Orientation::IntervalsAsRows ? "intervals-as-rows" : "meters-as-rows")
        << " interval_minutes=" << format_double(readings.interval_minutes()) << "\n";
    if (orientation == Orientation::IntervalsAsRows) {
        for (std::size_t r = 0; r < readings.node_order().size(); ++r)
            out << (r ? "," : "") << readings.node_order()[r];
        out << "\n";
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            for (Eigen::Index i = 0; i < values.rows(); ++i)
                out << (i ? "," : "") << format_double(values(i, j));
            out << "\n";
        }
    } else {
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            out << readings.node_order()[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < values.cols(); ++j)
                out << "," << format_double(values(i, j));
            out << "\n";
        }
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

ReadingsMatrix read_readings(const std::filesystem::path& path, Orientation orientation,
                             std::optional<double> interval_minutes_override) {
    auto in = open_in(path);
    const std::string name = path.string();
    std::string line;
    long line_no = 0;
    double interval_minutes = 15.0;
    Orientation file_orientation = Orientation::IntervalsAsRows;

    // Header comment (when written by this tool) carries orientation and
    // interval; an explicit argument wins.
    std::vector<std::string> data_lines;
    std::vector<long> data_line_numbers;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            for (const auto& token : tokenize(line.substr(1))) {
                if (token.find('=') == std::string::npos) continue;
                const auto [key, value] = split_kv(token, name, line_no);
                if (key == "orientation") {
                    if (value == "intervals-as-rows")
                        file_orientation = Orientation::IntervalsAsRows;
                    else if (value == "meters-as-rows")
                        file_orientation = Orientation::MetersAsRows;
                    else
                        throw ParseError(name, line_no, "unknown orientation '" + value + "'");
                } else if (key == "interval_minutes") {
                    interval_minutes = parse_double(value, name, line_no);
                }
            }
            continue;
        }
        data_lines.push_back(line);
        data_line_numbers.push_back(line_no);
    }
    if (orientation == Orientation::Auto) orientation = file_orientation;
    if (interval_minutes_override) interval_minutes = *interval_minutes_override;
    if (data_lines.empty()) throw ParseError(name, line_no, "no data rows");

    std::vector<NodeId> node_order;
    Eigen::MatrixXd values;
    if (orientation == Orientation::IntervalsAsRows) {
        const auto header = split_csv(data_lines[0]);
        if (header.empty()) throw ParseError(name, data_line_numbers[0], "empty meter header");
        for (const auto& id_text : header)
            node_order.push_back(
                static_cast<NodeId>(parse_long(id_text, name, data_line_numbers[0])));
        const auto n = static_cast<Eigen::Index>(node_order.size());
        const auto samples = static_cast<Eigen::Index>(data_lines.size()) - 1;
        if (samples < 1) throw ParseError(name, data_line_numbers[0], "no reading rows");
        values.resize(n, samples);
        for (Eigen::Index j = 0; j < samples; ++j) {
            const auto& row_line = data_lines[static_cast<std::size_t>(j) + 1];
            const long row_no = data_line_numbers[static_cast<std::size_t>(j) + 1];
            const auto fields = split_csv(row_line);
            if (static_cast<Eigen::Index>(fields.size()) != n)
                throw ParseError(name, row_no,
                                 "expected " + std::to_string(n) + " values, got " +
                                     std::to_string(fields.size()));
            for (Eigen::Index i = 0; i < n; ++i)
                values(i, j) = parse_double(fields[static_cast<std::size_t>(i)], name, row_no);
        }
    } else {
        const auto n = static_cast<Eigen::Index>(data_lines.size());
        Eigen::Index samples = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& row_line = data_lines[static_cast<std::size_t>(i)];
            const long row_no = data_line_numbers[static_cast<std::size_t>(i)];
            const auto fields = split_csv(row_line);
            if (fields.size() < 2) throw ParseError(name, row_no, "meter row needs id and values");
            if (samples < 0) {
                samples = static_cast<Eigen::Index>(fields.size()) - 1;
                values.resize(n, samples);
            } else if (static_cast<Eigen::Index>(fields.size()) - 1 != samples) {
                throw ParseError(name, row_no,
                                 "expected " + std::to_string(samples) + " values, got " +
                                     std::to_string(fields.size() - 1));
            }
            node_order.push_back(static_cast<NodeId>(parse_long(fields[0], name, row_no)));
            for (Eigen::Index j = 0; j < samples; ++j)
                values(i, j) = parse_double(fields[static_cast<std::size_t>(j) + 1], name, row_no);
        }
    }
    try {
        return ReadingsMatrix(std::move(values), std::move(node_order), interval_minutes);
    } catch (const Error& e) {
        throw ParseError(name, line_no, e.what());
    }
}

// ---- noise manifests --------------------------------------------------------

NoiseManifest make_manifest(const InjectedNoise& injected, const std::vector<NodeId>& node_order,
                            const NoiseConfig& cfg) {
    NoiseManifest m;
    m.seed = cfg.rng_seed;
    m.interval_minutes = cfg.interval_minutes;
    m.accuracy_class_pct = cfg.accuracy_class_pct;
    m.loss_low_pct = cfg.loss_low_pct;
    m.loss_high_pct = cfg.loss_high_pct;
    for (const auto& pair : injected.per_pair)
        m.pairs.push_back({pair.parent_level, pair.mu_total, pair.var_total});
    const auto n = static_cast<Eigen::Index>(node_order.size());
    auto at = [n](const Eigen::VectorXd& v, Eigen::Index i) {
        return v.size() == n ? v(i) : 0.0;
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        NoiseManifest::RowEntry row;
        row.id = node_order[static_cast<std::size_t>(i)];
        row.mu_lambda = at(injected.mu_lambda, i);
        row.sigma_lambda = at(injected.sigma_lambda, i);
        row.sigma_epsilon = at(injected.sigma_epsilon, i);
        row.sigma_delta = at(injected.sigma_delta, i);
        row.sigma_e = row.sigma_lambda + row.sigma_epsilon + row.sigma_delta;
        m.rows.push_back(row);
    }
    return m;
}

NoiseManifest make_manifest(const NoiseStats& stats, const std::vector<NodeId>& node_order,
                            int parent_level) {
    NoiseManifest m;
    m.pairs.push_back({parent_level, stats.mu_t, stats.var_lt});
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(node_order.size()); ++i) {
        NoiseManifest::RowEntry row;
        row.id = node_order[static_cast<std::size_t>(i)];
        row.mu_lambda = stats.mu_lambda(i);
        row.sigma_lambda = stats.sigma_lambda(i);
        row.sigma_epsilon = stats.sigma_epsilon(i);
        row.sigma_delta = stats.sigma_delta(i);
        row.sigma_e = stats.sigma_e(i);
        m.rows.push_back(row);
    }
    return m;
}

void write_noise_manifest(const std::filesystem::path& path, const NoiseManifest& manifest) {
    auto out = open_out(path);
    out << "# gridtop noise-manifest v1\n";
    if (manifest.seed) out << "seed=" << *manifest.seed << "\n";
    if (manifest.interval_minutes)
        out << "interval_minutes=" << format_double(*manifest.interval_minutes) << "\n";
    if (manifest.accuracy_class_pct)
        out << "accuracy_class_pct=" << format_double(*manifest.accuracy_class_pct) << "\n";
    if (manifest.loss_low_pct) out << "loss_low_pct=" << format_double(*manifest.loss_low_pct) << "\n";
    if (manifest.loss_high_pct)
        out << "loss_high_pct=" << format_double(*manifest.loss_high_pct) << "\n";
    for (const auto& pair : manifest.pairs)
        out << "pair parent_level=" << pair.parent_level << " mu_t=" << format_double(pair.mu_t)
            << " var_lt=" << format_double(pair.var_lt) << "\n";
    for (const auto& row : manifest.rows)
        out << "row id=" << row.id << " mu_lambda=" << format_double(row.mu_lambda)
            << " sigma_lambda=" << format_double(row.sigma_lambda)
            << " sigma_epsilon=" << format_double(row.sigma_epsilon)
            << " sigma_delta=" << format_double(row.sigma_delta)
            << " sigma_e=" << format_double(row.sigma_e) << "\n";
}

NoiseManifest read_noise_manifest(const std::filesystem::path& path) {
    auto in = open_in(path);
    const std::string name = path.string();
    NoiseManifest m;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (tokens[0] == "pair") {
            NoiseManifest::PairEntry pair{};
            for (std::size_t t = 1; t < tokens.size(); ++t) {
                const auto [key, value] = split_kv(tokens[t], name, line_no);
                if (key == "parent_level")
                    pair.parent_level = static_cast<int>(parse_long(value, name, line_no));
                else if (key == "mu_t") pair.mu_t = parse_double(value, name, line_no);
                else if (key == "var_lt") pair.var_lt = parse_double(value, name, line_no);
                else throw ParseError(name, line_no, "unknown pair field '" + key + "'");
            }
            m.pairs.push_back(pair);
        } else if (tokens[0] == "row") {
            NoiseManifest::RowEntry row{};
            for (std::size_t t = 1; t < tokens.size(); ++t) {
                const auto [key, value] = split_kv(tokens[t], name, line_no);
                if (key == "id") row.id = static_cast<NodeId>(parse_long(value, name, line_no));
                else if (key == "mu_lambda") row.mu_lambda = parse_double(value, name, line_no);
                else if (key == "sigma_lambda") row.sigma_lambda = parse_double(value, name, line_no);
                else if (key == "sigma_epsilon")
                    row.sigma_epsilon = parse_double(value, name, line_no);
                else if (key == "sigma_delta") row.sigma_delta = parse_double(value, name, line_no);
                else if (key == "sigma_e") row.sigma_e = parse_double(value, name, line_no);
                else throw ParseError(name, line_no, "unknown row field '" + key + "'");
            }
            m.rows.push_back(row);
        } else {
            const auto [key, value] = split_kv(tokens[0], name, line_no);
            if (key == "seed") m.seed = parse_u64(value, name, line_no);
            else if (key == "interval_minutes")
                m.interval_minutes = parse_double(value, name, line_no);
            else if (key == "accuracy_class_pct")
                m.accuracy_class_pct = parse_double(value, name, line_no);
            else if (key == "loss_low_pct") m.loss_low_pct = parse_double(value, name, line_no);
            else if (key == "loss_high_pct") m.loss_high_pct = parse_double(value, name, line_no);
            else throw ParseError(name, line_no, "unknown manifest key '" + key + "'");
        }
    }
    return m;
}

// ---- reports ----------------------------------------------------------------

void write_diagnostics(const std::filesystem::path& path, const TopologyResult& result) {
    auto out = open_out(path);
    out << "# gridtop diagnostics v1\n";
    out << "parent_level\tn_pair\tsamples_warning\tstatus\tsingular_gap\tcond_dependent\t"
           "min_margin\tambiguous_columns\tseconds\terror\n";
    for (const auto& pair : result.pairs) {
        const auto n_pair = pair.parents.size() + pair.children.size();
        out << pair.parent_level << "\t" << n_pair << "\t"
            << (pair.diagnostics.sample_warning ? 1 : 0) << "\t" << (pair.ok ? "ok" : "failed")
            << "\t" << format_double(pair.diagnostics.singular_gap) << "\t"
            << format_double(pair.diagnostics.cond_dependent) << "\t"
            << format_double(pair.diagnostics.min_margin) << "\t"
            << pair.diagnostics.ambiguous_columns.size() << "\t"
            << format_double(pair.diagnostics.seconds) << "\t"
            << (pair.ok ? "-" : pair.error) << "\n";
    }
}

void write_spectrum(const std::filesystem::path& path, const Eigen::VectorXd& singular_values) {
    auto out = open_out(path);
    out << "# gridtop singular-spectrum v1\n";
    out << "index\tsingular_value\n";
    for (Eigen::Index i = 0; i < singular_values.size(); ++i)
        out << i << "\t" << format_double(singular_values(i)) << "\n";
}

}  // namespace gridtop::io
