#include <iostream>

#include "remote_track/acceptance.hpp"

int main() {
  const rtrack::AcceptanceReport report = rtrack::run_acceptance();
  rtrack::print_report(report, std::cout);
  return report.all_pass() ? 0 : 1;
}
