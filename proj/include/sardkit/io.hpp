#ifndef SARDKIT_IO_HPP
#define SARDKIT_IO_HPP

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sardkit/blowup.hpp"
#include "sardkit/examples.hpp"
#include "sardkit/flow.hpp"
#include "sardkit/martinet.hpp"

namespace sardkit {

using Json = nlohmann::ordered_json;

// {"name": str, "X": [e1, e2, e3], "Y": [e1, e2, e3]} or {"builtin": name}.
// Throws ParseError (bad polynomial) or std::invalid_argument (bad JSON).
Distribution distribution_from_json(const std::string& text);
Json to_json(const Distribution& d);

Json to_json(const ScanReport& r);
Json to_json(const CompatReport& r);
Json to_json(const VolumeReport& r);
Json to_json(const ChainReport& r);
Json to_json(const ChainLink& l);
Json to_json(const TransformResult& r);

void write_orbit_csv(std::ostream& os, const OrbitTrace& tr);
// Both halves of a chain link, backward half first with negative times.
void write_link_csv(std::ostream& os, const ChainLink& l, const Poly& h, const VecField& field);

struct Polyline {
    std::vector<std::array<double, 2>> pts;
    std::string color = "#1f4e99";
    double width = 1.2;
};

// Static SVG line plot with axes and a title; deterministic output.
std::string svg_plot(const std::vector<Polyline>& lines, const std::string& title, const std::string& xlabel,
                     const std::string& ylabel);

std::string format_double(double v);

}  // namespace sardkit

#endif  // SARDKIT_IO_HPP
