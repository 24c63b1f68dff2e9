// JSON / CSV serialization for reports.  All emitters are deterministic:
// object keys keep insertion order (nlohmann::ordered_json) and integers that
// may exceed native width are rendered as decimal strings.
#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "dworklab/l_function.hpp"
#include "dworklab/local_ring.hpp"
#include "dworklab/sigma_module.hpp"

namespace dworklab {

using Json = nlohmann::ordered_json;

// Decimal rendering used whenever a value may not fit a 64-bit lane.
Json big_to_json(const BigInt& v);
Json rat_to_json(const BigRat& v);  // {"num": "...", "den": "..."}

Json ring_to_json(const RingPtr& R);
Json scalar_to_json(const PAdicScalar& s);  // pi-adic digit strings, low first
Json lseries_to_json(const LSeries& L);
Json agree_to_json(const LAgree& a);
Json polygon_to_json(const NewtonPolygon& poly);
Json module_to_json(const SigmaModule& M);  // shape summary, not full entries

// "x,y_num,y_den" header plus one row per lower-hull vertex.
std::string polygon_to_csv(const NewtonPolygon& poly);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace dworklab
