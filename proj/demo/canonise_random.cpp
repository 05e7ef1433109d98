// Runs the constructive pipeline and the baseline on random pair orderings of [300], then on a
// canonical one. Random orderings of this size are far below the guaranteed scale and usually fail.
#include <iostream>
#include <numeric>
#include <random>

#include "canon/canonical.hpp"
#include "canon/canonise.hpp"

int main(int argc, char** argv)
{
  using namespace canon;
  const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 1;
  const int k = 2, n = 300;
  for (std::uint64_t t = 0; t < 5; ++t) {
    std::vector<std::uint32_t> ranks(binom(n, k));
    std::iota(ranks.begin(), ranks.end(), 0u);
    std::mt19937_64 rng(seed + t);
    std::shuffle(ranks.begin(), ranks.end(), rng);
    Ordering o = Ordering::from_ranks(k, n, std::move(ranks));
    for (bool pipeline : {true, false}) {
      auto res = pipeline ? canonise_pipeline(o, 4) : canonise_baseline(o, 4);
      std::cout << (pipeline ? "pipeline " : "baseline ");
      if (res.ok()) std::cout << "found " << res.set->size() << " elements, " << res.spec->str() << "\n";
      else std::cout << "failed at " << res.failed_stage << "\n";
    }
  }
  Ordering c = gen_canonical(k, n, CanonicalSpec::parse("eps=-+ sigma=2,1"));
  auto res = canonise_pipeline(c, 8);
  std::cout << res.transcript.str();
  if (res.ok()) std::cout << "canonical input: " << res.spec->str() << "\n";
}
