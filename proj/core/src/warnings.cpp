#include "skilldiag/warnings.hpp"

#include <iostream>
#include <map>
#include <mutex>

namespace skilldiag {
namespace warnings {

namespace {

std::mutex g_mutex;
std::map<std::string, std::size_t>& registry() {
  static std::map<std::string, std::size_t> counts;
  return counts;
}

}  // namespace

void emit(const std::string& code, const std::string& message) {
  std::lock_guard<std::mutex> lock(g_mutex);
  auto& n = registry()[code];
  if (n == 0) {
    std::cerr << "warning [" << code << "]: " << message << "\n";
  }
  ++n;
}

std::size_t count(const std::string& code) {
  std::lock_guard<std::mutex> lock(g_mutex);
  auto it = registry().find(code);
  return it == registry().end() ? 0 : it->second;
}

std::size_t total() {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::size_t sum = 0;
  for (const auto& [code, n] : registry()) sum += n;
  return sum;
}

void reset() {
  std::lock_guard<std::mutex> lock(g_mutex);
  registry().clear();
}

}  // namespace warnings
}  // namespace skilldiag
