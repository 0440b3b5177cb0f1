// Minimal library usage: X copies Y with a one-step delay, so information
// flows Y -> X only.

#include "teflow/teflow.hpp"

#include <cstdio>

int main() {
    using namespace teflow;
    constexpr std::size_t n = 5000;

    rng::Stream stream(42);
    std::vector<Symbol> y(n), x(n);
    for (auto& s : y) s = static_cast<Symbol>(stream.below(2));
    x[0] = 0;
    for (std::size_t t = 1; t < n; ++t) x[t] = y[t - 1];

    auto xs = SymbolSeries::from_symbols(x, 2, {"X", "", "", Market::US});
    auto ys = SymbolSeries::from_symbols(y, 2, {"Y", "", "", Market::US});

    const EmbedParams embed{1, 1};
    InferenceParams inf;
    inf.bootstraps = 100;

    const auto yx = significance(xs, ys, embed, inf);
    const auto xy = significance(ys, xs, embed, inf);
    std::printf("Y -> X: TE %.4f  ETE %.4f  p %.4f%s\n", yx.te, yx.ete, yx.p_value,
                std::string(to_string(yx.mark)).c_str());
    std::printf("X -> Y: TE %.4f  ETE %.4f  p %.4f%s\n", xy.te, xy.ete, xy.p_value,
                std::string(to_string(xy.mark)).c_str());
}
