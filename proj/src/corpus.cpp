#include "rv/corpus.hpp"

#include <algorithm>
#include <numeric>

namespace rv {

namespace {

long uniform(std::mt19937_64& rng, long lo, long hi)
{
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

}  // namespace

Game random_game(PayoffClass c, const CorpusShape& shape, std::mt19937_64& rng)
{
    if (shape.vertices < 1 || shape.players < 1 || shape.max_degree < 1)
        throw GameError("corpus shape needs a vertex, a player and a successor");
    std::vector<std::string> players;
    for (int p = 0; p < shape.players; ++p)
        players.push_back("p" + std::to_string(p));
    GameBuilder b(c, players);
    for (int v = 0; v < shape.vertices; ++v)
        b.vertex("v" + std::to_string(v), static_cast<int>(uniform(rng, 0, shape.players - 1)));
    std::vector<int> all(shape.vertices);
    std::iota(all.begin(), all.end(), 0);
    for (int v = 0; v < shape.vertices; ++v) {
        const int degree = static_cast<int>(uniform(rng, 1, std::min(shape.max_degree, shape.vertices)));
        std::shuffle(all.begin(), all.end(), rng);
        for (int k = 0; k < degree; ++k) {
            const int e = b.edge(v, all[k]);
            for (int p = 0; p < shape.players; ++p)
                if (c == PayoffClass::mean || c == PayoffClass::energy || c == PayoffClass::discounted)
                    b.reward(e, p, Rational(uniform(rng, -shape.max_reward, shape.max_reward)));
        }
    }
    for (int v = 0; v < shape.vertices; ++v)
        for (int p = 0; p < shape.players; ++p) {
            if (c == PayoffClass::parity)
                b.color(v, p, uniform(rng, 0, shape.max_color));
            if (c == PayoffClass::reach && uniform(rng, 0, 2) == 0)
                b.target(v, p);
        }
    if (c == PayoffClass::discounted) {
        static const Rational choices[] = {Rational(1, 2), Rational(2, 3), Rational(3, 4)};
        b.discount(choices[uniform(rng, 0, 2)]);
    }
    b.init("v0");
    return b.build();
}

MealyMachine random_machine(const Game& g, int states, bool deterministic, std::mt19937_64& rng)
{
    if (states < 1)
        throw GameError("a machine needs a state");
    MealyMachine m;
    for (int q = 0; q < states; ++q)
        m.states.push_back("q" + std::to_string(q));
    m.controlled.assign(g.num_players(), 1);
    for (int q = 0; q < states; ++q)
        for (int v = 0; v < g.num_vertices(); ++v) {
            const auto succ = g.successors(v);
            const int count = deterministic ? 1 : static_cast<int>(uniform(rng, 1, 2));
            for (int k = 0; k < count; ++k) {
                const int to = static_cast<int>(uniform(rng, 0, states - 1));
                const int out = succ[uniform(rng, 0, static_cast<long>(succ.size()) - 1)];
                m.transitions.push_back({q, v, to, out});
            }
        }
    std::sort(m.transitions.begin(), m.transitions.end());
    m.transitions.erase(std::unique(m.transitions.begin(), m.transitions.end()), m.transitions.end());
    m.index(g.num_vertices());
    return m;
}

}  // namespace rv
