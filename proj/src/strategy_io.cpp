#include "sqrac/strategy_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sqrac/error.hpp"

namespace sqrac {

namespace {

using nlohmann::json;

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json mat_to_json(const Mat2& m) {
  json out = json::array();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
  return out;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

const json& array_of(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) fail(where, "expected an array of " + std::to_string(n) + " elements");
  return j;
}

Vec3 vec_from_json(const json& j, const std::string& where) {
  array_of(j, 3, where);
  return {number(j[0], where + "/0"), number(j[1], where + "/1"), number(j[2], where + "/2")};
}

Mat2 mat_from_json(const json& j, const std::string& where) {
  array_of(j, 4, where);
  Mat2 m;
  for (int k = 0; k < 4; ++k) {
    const std::string at = where + "/" + std::to_string(k);
    array_of(j[k], 2, at);
    m(k / 2, k % 2) = Complex(number(j[k][0], at + "/0"), number(j[k][1], at + "/1"));
  }
  return m;
}

// Re-throws physical validation failures with the location attached.
template <typename F>
auto located(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw DomainError(where + ": " + e.what());
  }
}

}  // namespace

std::string strategy_to_json(const Strategy& s) {
  json doc;
  doc["preparations"] = json::array();
  for (const auto& rho : s.preparations) doc["preparations"].push_back(vec_to_json(rho.bloch()));
  doc["instruments"] = json::array();
  for (const auto& inst : s.instruments) {
    json j;
    j["alpha"] = inst.alpha();
    j["t"] = vec_to_json(inst.axis_vector());
    j["unitaries"] = json::array({mat_to_json(inst.unitary(0)), mat_to_json(inst.unitary(1))});
    doc["instruments"].push_back(j);
  }
  doc["measurements"] = json::array();
  for (const auto& m : s.measurements) doc["measurements"].push_back({{"bias", m.bias()}, {"r", vec_to_json(m.direction())}});
  return doc.dump(2) + "\n";
}

Strategy strategy_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": malformed JSON");
  }
  Strategy s;
  const json& preps = array_of(member(doc, "preparations", "/"), kNumInputs, "/preparations");
  for (int x = 0; x < kNumInputs; ++x) {
    const std::string at = "/preparations/" + std::to_string(x);
    const Vec3 r = vec_from_json(preps[x], at);
    s.preparations[x] = located(at, [&] { return state_from_bloch(r); });
  }
  const json& insts = array_of(member(doc, "instruments", "/"), kNumSettings, "/instruments");
  for (int y = 0; y < kNumSettings; ++y) {
    const std::string at = "/instruments/" + std::to_string(y);
    const json& j = insts[y];
    const double alpha = number(member(j, "alpha", at), at + "/alpha");
    const Vec3 t = vec_from_json(member(j, "t", at), at + "/t");
    Mat2 u0 = Mat2::identity();
    Mat2 u1 = Mat2::identity();
    if (j.contains("unitaries")) {
      const json& us = array_of(j["unitaries"], 2, at + "/unitaries");
      u0 = mat_from_json(us[0], at + "/unitaries/0");
      u1 = mat_from_json(us[1], at + "/unitaries/1");
    } else if (j.contains("unitary")) {
      u0 = u1 = mat_from_json(j["unitary"], at + "/unitary");
    }
    s.instruments[y] = located(at, [&] { return BinaryInstrument::from_parts(alpha, t, u0, u1); });
  }
  const json& meas = array_of(member(doc, "measurements", "/"), kNumSettings, "/measurements");
  for (int z = 0; z < kNumSettings; ++z) {
    const std::string at = "/measurements/" + std::to_string(z);
    const double bias = number(member(meas[z], "bias", at), at + "/bias");
    const Vec3 r = vec_from_json(member(meas[z], "r", at), at + "/r");
    s.measurements[z] = located(at, [&] { return BinaryMeasurement::from_observable(bias, r); });
  }
  return s;
}

Strategy read_strategy_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return strategy_from_json(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace sqrac
