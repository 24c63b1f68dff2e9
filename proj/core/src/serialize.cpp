#include "dworklab/serialize.hpp"

#include <climits>
#include <fstream>
#include <sstream>

namespace dworklab {

Json big_to_json(const BigInt& v) {
  if (v >= LONG_MIN && v <= LONG_MAX) return v.convert_to<long>();
  return to_decimal(v);
}

Json rat_to_json(const BigRat& v) {
  Json j;
  j["num"] = big_to_json(boost::multiprecision::numerator(v));
  j["den"] = big_to_json(boost::multiprecision::denominator(v));
  return j;
}

Json ring_to_json(const RingPtr& R) {
  Json j;
  j["p"] = R->p();
  j["d"] = R->d();
  j["e"] = R->e();
  j["N"] = R->N();
  j["describe"] = R->describe();
  return j;
}

Json scalar_to_json(const PAdicScalar& s) {
  Json j = Json::array();
  for (const auto& digit : s.digit_strings()) j.push_back(digit);
  return j;
}

Json lseries_to_json(const LSeries& L) {
  Json j;
  j["D"] = L.D;
  j["modulus"] = L.modulus;
  j["exact_upto"] = L.exact_upto;
  j["provenance"] = L.provenance;
  j["ring"] = ring_to_json(L.R);
  Json coeffs = Json::array();
  for (const auto& c : L.c) coeffs.push_back(scalar_to_json(c));
  j["coeffs"] = std::move(coeffs);
  return j;
}

Json agree_to_json(const LAgree& a) {
  Json j;
  j["ok"] = a.ok;
  j["upto"] = a.upto;
  j["modulus"] = a.modulus;
  j["first_mismatch"] = a.first_mismatch;
  return j;
}

Json polygon_to_json(const NewtonPolygon& poly) {
  Json j;
  Json verts = Json::array();
  for (const auto& [x, y] : poly.vertices) {
    Json v;
    v["x"] = x;
    v["y"] = rat_to_json(y);
    verts.push_back(std::move(v));
  }
  Json segs = Json::array();
  for (const auto& [slope, len] : poly.segments) {
    Json s;
    s["slope"] = rat_to_json(slope);
    s["length"] = len;
    segs.push_back(std::move(s));
  }
  j["vertices"] = std::move(verts);
  j["segments"] = std::move(segs);
  return j;
}

Json module_to_json(const SigmaModule& M) {
  Json j;
  j["q"] = M.q;
  j["n"] = M.n;
  j["rank"] = M.rank();
  j["ring"] = ring_to_json(M.R);
  j["d_seq"] = M.d_seq;
  j["h_seq"] = M.h_seq;
  j["col_level"] = M.col_level;
  j["tail_level"] = (M.tail_level == kNoTail) ? Json("none") : Json(M.tail_level);
  return j;
}

std::string polygon_to_csv(const NewtonPolygon& poly) {
  std::ostringstream out;
  out << "x,y_num,y_den\n";
  for (const auto& [x, y] : poly.vertices)
    out << x << ',' << to_decimal(boost::multiprecision::numerator(y)) << ','
        << to_decimal(boost::multiprecision::denominator(y)) << '\n';
  return out.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), Err::BadInput, "write_text_file: cannot open " + path);
  out << contents;
  require(static_cast<bool>(out), Err::BadInput, "write_text_file: write failed " + path);
}

}  // namespace dworklab
