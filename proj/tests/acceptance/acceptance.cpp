// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "melnikov/verify.hpp"

using namespace melnikov;

namespace {

struct Criterion {
  const char* id;
  const char* title;
  std::function<std::vector<SuiteResult>()> run;
};

std::vector<SuiteResult> both(const std::function<SuiteResult(SystemId)>& f) {
  return {f(SystemId::LV), f(SystemId::BT)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "reflection identity", [] { return both([](SystemId s) { return reflection_suite(s, 8, 20); }); }},
      {"AC2", "reduction against direct quadrature",
       [] {
         std::vector<SuiteResult> out;
         for (SystemId s : {SystemId::LV, SystemId::BT})
           for (int n = 1; n <= 6; ++n) out.push_back(reduction_oracle_suite(s, n, 20, 20, 1000 + n));
         return out;
       }},
      {"AC3", "base identities", [] { return both([](SystemId s) { return base_identity_suite(s, 20); }); }},
      {"AC4", "Picard-Fuchs and second-order residuals",
       [] {
         std::vector<SuiteResult> out;
         for (SystemId s : {SystemId::LV, SystemId::BT}) {
           out.push_back(pf_suite(s, 30));
           out.push_back(second_order_suite(s, 30));
         }
         return out;
       }},
      {"AC5", "Riccati residuals", [] { return both([](SystemId s) { return riccati_suite(s, 30); }); }},
      {"AC6", "annihilating operators", [] { return both([](SystemId s) { return annihilator_suite(s, 50, 6); }); }},
      {"AC7", "single zero of I(0,0)'' for BT", [] { return std::vector{bt_second_derivative_suite()}; }},
      {"AC8", "zero counts within the bounds",
       [] {
         std::vector<SuiteResult> out;
         for (SystemId s : {SystemId::LV, SystemId::BT})
           for (int n = 1; n <= 6; ++n) out.push_back(bound_envelope_suite(s, n, 100, 8000 + n));
         return out;
       }},
      {"AC9", "simulated limit cycles", [] { return both([](SystemId s) { return simulation_suite(s, 1e-3, 40); }); }},
      {"AC10", "LV positivity and monotonicity", [] { return std::vector{lv_positivity_suite(200)}; }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<SuiteResult> results;
    std::string error;
    try {
      results = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = error.empty();
    for (const auto& r : results) ok = ok && r.passed;
    for (const auto& r : results) std::printf("    %s\n", suite_line(r).c_str());
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    std::printf("%s %s %s (%.2fs)\n", ok ? "PASS" : "FAIL", c.id, c.title, secs);
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
