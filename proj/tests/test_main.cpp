#include "framework.hpp"

#include <cstdio>
#include <exception>

namespace testfw {

std::vector<Case>& all_cases() {
  static std::vector<Case> cases;
  return cases;
}

int register_case(const char* name, void (*fn)()) {
  all_cases().push_back({name, fn});
  return 0;
}

void fail(const std::string& msg) { throw Failure{msg}; }

void require(bool ok, const char* expr, const char* file, int line) {
  if (ok) return;
  std::ostringstream os;
  os << file << ":" << line << ": " << expr;
  fail(os.str());
}

void require_near(double got, double want, double tol, const char* expr, const char* file,
                  int line) {
  if (std::isfinite(got) && std::abs(got - want) <= tol) return;
  std::ostringstream os;
  os.precision(17);
  os << file << ":" << line << ": " << expr << " = " << got << ", expected " << want << " +- "
     << tol << " (off by " << got - want << ")";
  fail(os.str());
}

}  // namespace testfw

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  int ran = 0, failed = 0;
  for (const auto& c : testfw::all_cases()) {
    if (!filter.empty() && std::string(c.name).find(filter) == std::string::npos) continue;
    ++ran;
    try {
      c.fn();
      std::printf("[pass] %s\n", c.name);
    } catch (const testfw::Failure& f) {
      ++failed;
      std::printf("[FAIL] %s\n       %s\n", c.name, f.msg.c_str());
    } catch (const std::exception& e) {
      ++failed;
      std::printf("[FAIL] %s\n       unexpected exception: %s\n", c.name, e.what());
    } catch (...) {
      ++failed;
      std::printf("[FAIL] %s\n       unexpected non-standard exception\n", c.name);
    }
    std::fflush(stdout);
  }
  std::printf("%d/%d tests passed\n", ran - failed, ran);
  if (ran == 0) {
    std::printf("no tests matched '%s'\n", filter.c_str());
    return 1;
  }
  return failed == 0 ? 0 : 1;
}
