#include "CLI11.hpp"

#include <iostream>

#include "certicos/synth.hpp"

// Small companion generator for C2VD datasets used in benchmarks and tests.
int main(int argc, char** argv) {
    CLI::App app{"c2vd_gen: synthesize unit-vector datasets"};

    std::string out;
    std::string mode = "uniform";
    uint64_t n = 1000;
    uint32_t d = 16;
    uint32_t clusters = 10;
    double sigma = 0.1;
    uint64_t seed = 1;

    app.add_option("--out", out, "output C2VD path")->required();
    app.add_option("--mode", mode, "uniform | clustered")
        ->check(CLI::IsMember({"uniform", "clustered"}));
    app.add_option("--n", n, "rows");
    app.add_option("--d", d, "dimension");
    app.add_option("--clusters", clusters, "cluster count (clustered mode)");
    app.add_option("--sigma", sigma, "within-cluster noise std (clustered mode)");
    app.add_option("--seed", seed, "rng seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 2;
    }

    try {
        certicos::UnitVectorSet set =
            mode == "uniform" ? certicos::make_uniform_set(n, d, seed)
                              : certicos::make_clustered_set(n, d, clusters, sigma, seed);
        certicos::save_vectors(set, out);
        std::cout << "wrote " << out << ": n=" << n << " d=" << d << " mode=" << mode << '\n';
        return 0;
    } catch (const certicos::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
