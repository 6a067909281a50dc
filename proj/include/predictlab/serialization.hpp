#pragma once

#include <string>

#include <json.hpp>

#include "predictlab/dynamics.hpp"
#include "predictlab/measures.hpp"
#include "predictlab/processes.hpp"
#include "predictlab/sets.hpp"

namespace predictlab::io {

using Json = nlohmann::json;

/// Strict object reader: every key must be consumed, otherwise `done()` throws
/// ErrorKind::InvalidArgument naming the first unknown field.
class Fields {
 public:
  Fields(const Json& j, std::string context);

  bool has(const std::string& key) const;
  const Json& at(const std::string& key);
  const Json* find(const std::string& key);

  template <typename T>
  T get(const std::string& key) {
    return convert<T>(at(key), key);
  }
  template <typename T>
  T get_or(const std::string& key, T fallback) {
    const Json* v = find(key);
    return v ? convert<T>(*v, key) : fallback;
  }
  void done() const;
  const std::string& context() const { return context_; }

 private:
  template <typename T>
  T convert(const Json& v, const std::string& key) const {
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception&) {
      fail(ErrorKind::InvalidArgument, context_ + "." + key + " has the wrong type");
    }
  }

  const Json& j_;
  std::string context_;
  std::vector<std::string> used_;
};

Json to_json(const IntSet& s);
IntSet int_set_from_json(const Json& j);
/// "lo:hi;1,3..5,8"
std::string to_run_length(const IntSet& s);
IntSet int_set_from_run_length(const std::string& text);

Window window_from_json(const Json& j);
/// "LO:HI"
Window parse_window(const std::string& text);

Json to_json(const sets::SetSpec& spec);
sets::SpecPtr set_spec_from_json(const Json& j);

Json to_json(const measures::CircleMeasure& mu);
measures::MeasurePtr measure_from_json(const Json& j);

dynamics::RotationSystem system_from_json(const Json& j);
dynamics::TargetSet target_from_json(const Json& j);
dynamics::Point point_from_json(const Json& j);

processes::ProcessModel model_from_json(const Json& j);

Json complex_to_json(const measures::Complex& c);
measures::Complex complex_from_json(const Json& j);

}  // namespace predictlab::io
