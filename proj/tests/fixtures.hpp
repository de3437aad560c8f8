#pragma once
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <string>

inline nlohmann::json load_fixture(const std::string& name) {
  const char* dir = std::getenv("CWA_FIXTURES");
  std::string file = name.find('.') == std::string::npos ? name + ".json" : name;
  std::string path = std::string(dir ? dir : "fixtures") + "/" + file;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture " + path);
  nlohmann::json j;
  in >> j;
  return j;
}
