#ifndef LANDAU_IO_HPP
#define LANDAU_IO_HPP

#include <string>
#include <vector>

#include "landau/config.hpp"
#include "landau/ids.hpp"

namespace landau {

// Shortest round-trip decimal form, '.'-decimal, locale independent.
std::string format_double(double v);

// CSV with '#'-prefixed provenance comments, then a header row; fixed column
// order, byte-stable for fixed inputs.
void write_table(const std::string& path, const std::vector<std::string>& comments,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

void write_ids_csv(const std::string& path, const IDSCurve& curve, const std::string& hash);
void write_meta_json(const std::string& path, const RunConfig& cfg, const IDSCurve& curve,
                     const std::string& hash);

std::string provenance_line(const std::string& hash);

} // namespace landau

#endif
