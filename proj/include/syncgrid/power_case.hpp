#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace syncgrid {

inline constexpr const char* kCaseSchema = "syncgrid-case/1";

struct Bus {
    int id = 0;
    double vm = 1.0;     // p.u.
    double pd_mw = 0.0;  // real power demand
    int area = 1;
    std::optional<double> inertia;
    std::optional<double> damping;
};

struct Generator {
    int bus = 0;
    double pg_mw = 0.0;
    bool in_service = true;
};

struct Branch {
    int from = 0;
    int to = 0;
    double r = 0.0;
    double x = 0.0;
    double ratio = 0.0;       // 0 means nominal (1)
    double rate_a_mva = 0.0;  // 0 means unlimited
    std::optional<double> angle_limit;  // rad, overrides the rating
    bool in_service = true;
};

/// Lossless active-power case. A bus is a generator bus when it hosts an in-service generator.
struct PowerCase {
    std::string name;
    double base_mva = 100.0;
    std::vector<Bus> buses;
    std::vector<Generator> generators;
    std::vector<Branch> branches;
    std::vector<std::string> warnings;
    bool resistance_dropped = false;

    /// Position of a bus id. Throws InconsistentCase for unknown ids.
    [[nodiscard]] int bus_index(int id) const;
    /// Checks ids, endpoints and reactances. Throws InconsistentCase.
    void validate() const;
    [[nodiscard]] std::vector<bool> generator_buses() const;
    /// Net injection per bus in p.u.: generation minus demand.
    [[nodiscard]] std::vector<double> injections_pu() const;
    [[nodiscard]] double total_load_mw() const;
    [[nodiscard]] double total_generation_mw() const;
};

PowerCase case_from_json(const nlohmann::json& j);
nlohmann::json case_to_json(const PowerCase& c);
PowerCase parse_case_json(const std::string& text);

/// MATPOWER-style case tables (mpc.baseMVA, mpc.bus, mpc.gen, mpc.branch).
/// Unsupported fields are skipped with a warning. Generator setpoints Vg become bus voltage magnitudes.
PowerCase parse_matpower(const std::string& text);

/// .m files go through the MATPOWER importer, everything else through the JSON schema.
PowerCase load_case(const std::string& path);

}  // namespace syncgrid
