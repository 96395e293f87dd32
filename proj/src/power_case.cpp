#include "syncgrid/power_case.hpp"

#include "syncgrid/errors.hpp"
#include "syncgrid/graph_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

namespace syncgrid {

int PowerCase::bus_index(int id) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == id) return static_cast<int>(i);
    throw Error(ErrorCode::InconsistentCase, "unknown bus id " + std::to_string(id));
}

void PowerCase::validate() const {
    if (buses.empty()) throw Error(ErrorCode::InconsistentCase, "case has no buses");
    if (!(base_mva > 0.0)) throw Error(ErrorCode::InconsistentCase, "base MVA must be positive");
    std::set<int> ids;
    for (const auto& b : buses) {
        if (!ids.insert(b.id).second) throw Error(ErrorCode::InconsistentCase, "duplicate bus id " + std::to_string(b.id));
        if (!(b.vm > 0.0)) throw Error(ErrorCode::InconsistentCase, "bus " + std::to_string(b.id) + " has vm <= 0");
    }
    for (const auto& g : generators)
        if (!ids.count(g.bus))
            throw Error(ErrorCode::InconsistentCase, "generator at missing bus " + std::to_string(g.bus));
    for (const auto& br : branches) {
        if (!ids.count(br.from) || !ids.count(br.to))
            throw Error(ErrorCode::InconsistentCase,
                        "branch " + std::to_string(br.from) + "-" + std::to_string(br.to) + " references a missing bus");
        if (br.in_service && !(br.x > 0.0))
            throw Error(ErrorCode::InconsistentCase, "branch " + std::to_string(br.from) + "-" + std::to_string(br.to) +
                                                         " needs positive reactance");
    }
}

std::vector<bool> PowerCase::generator_buses() const {
    std::vector<bool> out(buses.size(), false);
    for (const auto& g : generators)
        if (g.in_service) out[bus_index(g.bus)] = true;
    return out;
}

std::vector<double> PowerCase::injections_pu() const {
    std::vector<double> p(buses.size(), 0.0);
    for (std::size_t i = 0; i < buses.size(); ++i) p[i] = -buses[i].pd_mw / base_mva;
    for (const auto& g : generators)
        if (g.in_service) p[bus_index(g.bus)] += g.pg_mw / base_mva;
    return p;
}

double PowerCase::total_load_mw() const {
    double s = 0.0;
    for (const auto& b : buses) s += b.pd_mw;
    return s;
}

double PowerCase::total_generation_mw() const {
    double s = 0.0;
    for (const auto& g : generators)
        if (g.in_service) s += g.pg_mw;
    return s;
}

PowerCase case_from_json(const nlohmann::json& j) {
    PowerCase c;
    try {
        if (j.contains("schema") && j.at("schema").get<std::string>() != kCaseSchema)
            throw Error(ErrorCode::ParseError, "unsupported case schema " + j.at("schema").get<std::string>());
        c.name = j.value("name", std::string{});
        c.base_mva = j.value("base_mva", 100.0);
        for (const auto& b : j.at("buses")) {
            Bus bus;
            bus.id = b.at("id").get<int>();
            bus.vm = b.value("vm", 1.0);
            bus.pd_mw = b.value("pd", 0.0);
            bus.area = b.value("area", 1);
            if (b.contains("inertia")) bus.inertia = b.at("inertia").get<double>();
            if (b.contains("damping")) bus.damping = b.at("damping").get<double>();
            c.buses.push_back(bus);
        }
        for (const auto& g : j.value("generators", nlohmann::json::array())) {
            Generator gen;
            gen.bus = g.at("bus").get<int>();
            gen.pg_mw = g.value("pg", 0.0);
            gen.in_service = g.value("status", 1) != 0;
            c.generators.push_back(gen);
        }
        for (const auto& b : j.at("branches")) {
            Branch br;
            br.from = b.at("from").get<int>();
            br.to = b.at("to").get<int>();
            br.r = b.value("r", 0.0);
            br.x = b.at("x").get<double>();
            br.ratio = b.value("ratio", 0.0);
            br.rate_a_mva = b.value("rate_a", 0.0);
            if (b.contains("angle_limit")) br.angle_limit = b.at("angle_limit").get<double>();
            br.in_service = b.value("status", 1) != 0;
            if (br.r != 0.0) c.resistance_dropped = true;
            c.branches.push_back(br);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("case JSON: ") + e.what());
    }
    if (c.resistance_dropped) c.warnings.emplace_back("branch resistances dropped (lossless model)");
    c.validate();
    return c;
}

nlohmann::json case_to_json(const PowerCase& c) {
    nlohmann::json buses = nlohmann::json::array(), gens = nlohmann::json::array(), branches = nlohmann::json::array();
    for (const auto& b : c.buses) {
        nlohmann::json o = {{"id", b.id}, {"vm", b.vm}, {"pd", b.pd_mw}, {"area", b.area}};
        if (b.inertia) o["inertia"] = *b.inertia;
        if (b.damping) o["damping"] = *b.damping;
        buses.push_back(o);
    }
    for (const auto& g : c.generators) gens.push_back({{"bus", g.bus}, {"pg", g.pg_mw}, {"status", g.in_service ? 1 : 0}});
    for (const auto& br : c.branches) {
        nlohmann::json o = {{"from", br.from}, {"to", br.to},         {"r", br.r},
                            {"x", br.x},       {"ratio", br.ratio},   {"rate_a", br.rate_a_mva},
                            {"status", br.in_service ? 1 : 0}};
        if (br.angle_limit) o["angle_limit"] = *br.angle_limit;
        branches.push_back(o);
    }
    return {{"schema", kCaseSchema}, {"name", c.name},        {"base_mva", c.base_mva},
            {"buses", buses},        {"generators", gens},    {"branches", branches}};
}

PowerCase parse_case_json(const std::string& text) { return case_from_json(parse_json_text(text)); }

namespace {

class MatpowerLexer {
public:
    explicit MatpowerLexer(const std::string& text) : s_(text) {}

    [[nodiscard]] bool done() {
        skip_blank(true);
        return pos_ >= s_.size();
    }

    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return col_; }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void advance() {
        if (pos_ >= s_.size()) return;
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    /// Skips spaces, tabs, comments and (optionally) newlines.
    void skip_blank(bool newlines) {
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (c == '%') {
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
                advance();
            } else if (c == '.' && s_.compare(pos_, 3, "...") == 0) {
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
                advance();
            } else {
                break;
            }
        }
    }

    std::string identifier() {
        std::string out;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '.')) {
            out.push_back(s_[pos_]);
            advance();
        }
        return out;
    }

    void skip_statement() {
        int depth = 0;
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (c == '%') {
                skip_blank(false);
                continue;
            }
            if (c == '[' || c == '{') ++depth;
            if (c == ']' || c == '}') --depth;
            if (depth <= 0 && (c == ';' || c == '\n')) {
                advance();
                return;
            }
            advance();
        }
    }

    std::vector<std::vector<double>> matrix() {
        std::vector<std::vector<double>> rows;
        std::vector<double> row;
        advance();  // '['
        for (;;) {
            skip_blank(false);
            const char c = peek();
            if (c == '\0') throw ParseError("unterminated matrix", line_, col_);
            if (c == ']') {
                advance();
                if (!row.empty()) rows.push_back(row);
                break;
            }
            if (c == ';' || c == '\n') {
                advance();
                if (!row.empty()) rows.push_back(row);
                row.clear();
                continue;
            }
            if (c == ',') {
                advance();
                continue;
            }
            row.push_back(number());
        }
        skip_blank(false);
        if (peek() == ';') advance();
        return rows;
    }

    double number() {
        const int l = line_, cl = col_;
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) {
            std::string tok;
            while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != ';' &&
                   s_[pos_] != ']' && tok.size() < 32) {
                tok.push_back(s_[pos_]);
                advance();
            }
            throw ParseError("expected a number, found '" + tok + "'", l, cl);
        }
        for (const char* p = begin; p < end; ++p) advance();
        return v;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

PowerCase parse_matpower(const std::string& text) {
    MatpowerLexer lex(text);
    std::map<std::string, std::vector<std::vector<double>>> tables;
    std::map<std::string, int> table_lines;
    PowerCase c;
    bool have_base = false;

    while (!lex.done()) {
        const int l = lex.line(), cl = lex.column();
        const std::string id = lex.identifier();
        if (id.empty()) throw ParseError(std::string("unexpected character '") + lex.peek() + "'", l, cl);
        if (id == "function") {
            lex.skip_blank(false);
            std::string rest;
            while (lex.peek() != '\n' && lex.peek() != '\0') {
                rest.push_back(lex.peek());
                lex.advance();
            }
            const auto eq = rest.find('=');
            c.name = eq == std::string::npos ? rest : rest.substr(eq + 1);
            while (!c.name.empty() && std::isspace(static_cast<unsigned char>(c.name.front()))) c.name.erase(0, 1);
            while (!c.name.empty() && std::isspace(static_cast<unsigned char>(c.name.back()))) c.name.pop_back();
            continue;
        }
        lex.skip_blank(false);
        if (lex.peek() != '=') {
            c.warnings.push_back("line " + std::to_string(l) + ": ignored statement '" + id + "'");
            lex.skip_statement();
            continue;
        }
        lex.advance();
        lex.skip_blank(false);
        const std::string field = id.rfind("mpc.", 0) == 0 ? id.substr(4) : id;
        if (lex.peek() == '[') {
            const int tl = lex.line();
            auto rows = lex.matrix();
            if (field == "bus" || field == "gen" || field == "branch") {
                tables[field] = std::move(rows);
                table_lines[field] = tl;
            } else {
                c.warnings.push_back("ignored unsupported field '" + field + "'");
            }
        } else if (field == "baseMVA") {
            c.base_mva = lex.number();
            have_base = true;
            lex.skip_statement();
        } else {
            if (field != "version") c.warnings.push_back("ignored unsupported field '" + field + "'");
            lex.skip_statement();
        }
    }

    for (const char* required : {"bus", "branch"})
        if (!tables.count(required)) throw ParseError(std::string("missing mpc.") + required + " table", lex.line(), 1);
    if (!have_base) c.warnings.emplace_back("mpc.baseMVA missing; assuming 100");

    bool reactive = false, shunts = false, charging = false, shifts = false;
    for (const auto& row : tables["bus"]) {
        if (row.size() < 13) throw ParseError("bus rows need 13 columns", table_lines["bus"], 1);
        Bus b;
        b.id = static_cast<int>(row[0]);
        b.pd_mw = row[2];
        b.area = static_cast<int>(row[6]);
        b.vm = row[7];
        reactive |= row[3] != 0.0;
        shunts |= row[4] != 0.0 || row[5] != 0.0;
        if (static_cast<int>(row[1]) == 4) c.warnings.push_back("isolated bus " + std::to_string(b.id) + " kept as listed");
        c.buses.push_back(b);
    }
    for (const auto& row : tables["gen"]) {
        if (row.size() < 8) throw ParseError("gen rows need at least 8 columns", table_lines["gen"], 1);
        Generator g;
        g.bus = static_cast<int>(row[0]);
        g.pg_mw = row[1];
        g.in_service = row[7] > 0.0;
        c.generators.push_back(g);
        if (g.in_service) {
            for (auto& b : c.buses)
                if (b.id == g.bus) b.vm = row[5];
        }
    }
    for (const auto& row : tables["branch"]) {
        if (row.size() < 11) throw ParseError("branch rows need at least 11 columns", table_lines["branch"], 1);
        Branch br;
        br.from = static_cast<int>(row[0]);
        br.to = static_cast<int>(row[1]);
        br.r = row[2];
        br.x = row[3];
        charging |= row[4] != 0.0;
        br.rate_a_mva = row[5];
        br.ratio = row[8];
        shifts |= row[9] != 0.0;
        br.in_service = row[10] > 0.0;
        if (br.r != 0.0) c.resistance_dropped = true;
        c.branches.push_back(br);
    }
    if (reactive) c.warnings.emplace_back("reactive demand ignored");
    if (shunts) c.warnings.emplace_back("bus shunts ignored");
    if (charging) c.warnings.emplace_back("line charging ignored");
    if (shifts) c.warnings.emplace_back("phase shifts ignored");
    if (c.resistance_dropped) c.warnings.emplace_back("branch resistances dropped (lossless model)");
    c.validate();
    return c;
}

PowerCase load_case(const std::string& path) {
    const auto text = read_text_file(path);
    if (path.size() >= 2 && path.substr(path.size() - 2) == ".m") return parse_matpower(text);
    return parse_case_json(text);
}

}  // namespace syncgrid
