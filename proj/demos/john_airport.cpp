// John at the airport, read two ways: as a CP-net with a scenario variable,
// and as a SEP-net where being on time is part of the scenario.

#include <iostream>

#include "sepnet/sepnet.hpp"

using namespace sepnet;

namespace {

constexpr const char* kCpNet = R"(net john
variables {
  S : scenario {a, a_bar}
  T : preference {o, o_bar}
  P : preference {c, c_bar} <- S, T
}
cptables {
  T { : o > o_bar }
  P {
    a, o : c_bar > c
    a, o_bar : c_bar > c
    a_bar, o : c > c_bar
    a_bar, o_bar : c_bar > c
  }
}
)";

constexpr const char* kSepNet = R"(net john_sep
variables {
  S : scenario {a, a_bar}
  T : scenario {o, o_bar}
  P : preference {c, c_bar} <- S, T
}
cptables {
  P {
    a, o : c_bar > c
    a, o_bar : c_bar > c
    a_bar, o : c > c_bar
    a_bar, o_bar : c_bar > c
  }
}
)";

}  // namespace

int main() {
  auto net = parse_net(kCpNet);

  std::cout << "Best outcome per scenario:\n";
  for (const char* s : {"a", "a_bar"})
    std::cout << "  S=" << s << "  ->  " << format_outcome(net, optimal_outcome(net, {{"S", s}})) << "\n";

  auto a = parse_outcome(net, "a,o,c_bar");
  auto b = parse_outcome(net, "a,o_bar,c");
  auto d = dominates(net, a, b);
  std::cout << "\n" << format_outcome(net, a) << " vs " << format_outcome(net, b) << ": " << to_string(d.relation)
            << "\n";
  for (const auto& e : d.witness)
    std::cout << "  " << format_outcome(net, e.from) << " -> " << format_outcome(net, e.to) << " (flip "
              << net.variables[e.variable].name << ")\n";

  std::cout << "\nConsistent: " << (is_consistent(net).consistent ? "yes" : "no") << "\n";

  auto sep = parse_net(kSepNet);
  std::cout << "\nSEP reading, best choice per scenario:\n";
  for (const auto& s : all_scenarios(sep))
    std::cout << "  " << scenario_label(sep, s) << "  ->  " << format_outcome(sep, to_outcome(sep, sep_optimal(sep, s)))
              << "\n";

  std::cout << "\nInduced order (DOT):\n" << to_dot(net, induced_preorder(net));
}
