// Prints every canonical ordering of [2k+1]^(k) for k = 1, 2, 3 and checks they are distinct.
#include <iostream>
#include <set>

#include "canon/canonical.hpp"

int main()
{
  using namespace canon;
  for (int k = 1; k <= 3; ++k) {
    const int n = 2 * k + 1;
    std::set<std::vector<std::uint32_t>> tables;
    for (const auto& spec : all_specs(k)) {
      Ordering o = materialise(gen_canonical(k, n, spec));
      tables.insert(o.ranks());
      auto back = is_canonical(o);
      std::cout << "k=" << k << " " << spec.str() << " -> " << (back ? back->str() : "?") << "\n";
    }
    std::cout << "k=" << k << ": " << tables.size() << " distinct tables\n";
  }
}
