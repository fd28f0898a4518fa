/*
 Copyright 2026 The Rendezvous Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef RENDEZVOUS_IO_HPP
#define RENDEZVOUS_IO_HPP

#include "rendezvous/config.hpp"
#include "rendezvous/optimizer.hpp"
#include "rendezvous/sim.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rdv {

inline constexpr int kFormatVersion = 1;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Delimited table with a commented header block.
 *
 * Layout:
 *   # rendezvous <kind>
 *   # format_version = 1
 *   # config_digest = <16 hex digits>
 *   # config: <key> = <value>      (one line per resolved key)
 *   # meta: <key> = <value>        (file-specific)
 *   <comma-separated column names>
 *   <rows>
 */
struct Table {
    std::string kind;
    int version = kFormatVersion;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    const std::string& meta_value(const std::string& key) const;
    /// Column index; throws FormatError when absent.
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, std::size_t col) const;
};

void write_table(std::ostream& os, const Table& table);
void write_table(const std::string& path, const Table& table);
/// Throws FormatError on a malformed file, an unknown version or a kind other than @p expected_kind.
Table read_table(const std::string& path, const std::string& expected_kind);

/// Scenario embedded in a table's header.
RunConfig embedded_config(const Table& table);

/// Header block filled from a resolved config.
Table make_table(const std::string& kind, const RunConfig& cfg, std::vector<std::string> columns);

inline const std::vector<std::string> kTrajectoryColumns = {"t",  "x",  "y",   "theta",     "vx",   "vy",
                                                            "omega", "Fx", "Fy", "tau", "kos_state", "g_min"};

/// Trajectory export. The last row carries a zero wrench (there are N wrenches for N + 1 knots).
Table trajectory_table(const PlannedTrajectory& plan, const RunConfig& cfg);
PlannedTrajectory trajectory_from_table(const Table& table);

/// Physics-rate state history with the per-step audit distance.
Table run_record_table(const SimResult& result, const RunConfig& cfg);
/// Per-slot binary firings: t_slot, u1..u8.
Table firing_table(const SimResult& result, const RunConfig& cfg);
/// Control-rate reference, tracking error and target-frame relative velocity.
Table control_table(const SimResult& result, const RunConfig& cfg);

}  // namespace rdv

#endif  // RENDEZVOUS_IO_HPP
