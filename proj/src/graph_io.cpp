#include "syncgrid/graph_io.hpp"

#include "syncgrid/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace syncgrid {

namespace {

std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool parse_double(const std::string& s, double& out) {
    std::istringstream is(s);
    is >> out;
    return !is.fail() && is.eof();
}

}  // namespace

nlohmann::json parse_json_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(e.what(), line, col);
    }
}

WeightedGraph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw Error(ErrorCode::InvalidGraph, "graph JSON needs \"n\" and \"edges\"");
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() < 2 || e.size() > 3)
            throw Error(ErrorCode::InvalidGraph, "each edge must be [i, j] or [i, j, weight]");
        Edge edge;
        edge.source = e[0].get<int>() - 1;
        edge.sink = e[1].get<int>() - 1;
        edge.weight = e.size() == 3 ? e[2].get<double>() : 1.0;
        edges.push_back(edge);
    }
    return WeightedGraph::canonical(n, std::move(edges));
}

WeightedGraph parse_graph_json(const std::string& text) { return graph_from_json(parse_json_text(text)); }

nlohmann::json graph_to_json(const WeightedGraph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({e.source + 1, e.sink + 1, e.weight});
    return {{"n", g.node_count()}, {"edges", edges}};
}

WeightedGraph parse_edge_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<Edge> edges;
    int line_no = 0, max_id = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            double tmp;
            if (!parse_double(fields[0], tmp)) continue;
        }
        if (fields.size() != 3) throw ParseError("expected i,j,weight", line_no, 1);
        double vals[3];
        for (int k = 0; k < 3; ++k)
            if (!parse_double(fields[k], vals[k]))
                throw ParseError("not a number: " + fields[k], line_no, static_cast<int>(line.find(fields[k])) + 1);
        Edge e{static_cast<int>(vals[0]) - 1, static_cast<int>(vals[1]) - 1, vals[2]};
        max_id = std::max({max_id, e.source + 1, e.sink + 1});
        edges.push_back(e);
    }
    return WeightedGraph::canonical(max_id, std::move(edges));
}

WeightedGraph load_graph(const std::string& path) {
    const auto text = read_text_file(path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return parse_edge_csv(text);
    return parse_graph_json(text);
}

Eigen::VectorXd parse_vector_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> values;
    int line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        std::vector<double> row;
        bool header = false;
        for (const auto& f : fields) {
            double v;
            if (!parse_double(f, v)) {
                if (first) {
                    header = true;
                    break;
                }
                throw ParseError("not a number: " + f, line_no, static_cast<int>(line.find(f)) + 1);
            }
            row.push_back(v);
        }
        if (!header) values.insert(values.end(), row.begin(), row.end());
        first = false;
    }
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Eigen::VectorXd load_vector(const std::string& path) { return parse_vector_csv(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << contents;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace syncgrid
