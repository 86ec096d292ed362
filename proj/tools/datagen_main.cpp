// Writes the fixed-seed synthetic evaluation datasets as CSV files so the
// CLI and the test suite read them the same way as any external data.

#include "prcf/dataset.hpp"
#include "prcf/synthetic.hpp"

#include <exception>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    std::string out_dir = ".";
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--out-dir" && i + 1 < argc) {
            out_dir = argv[++i];
        } else {
            std::cerr << "usage: prcf-datagen [--out-dir DIR]\n";
            return 2;
        }
    }
    try {
        using namespace prcf;
        const Dataset credit = make_credit_surrogate(kCreditSeed);
        save_csv(credit, out_dir + "/credit_default.csv");
        std::cout << "wrote " << out_dir << "/credit_default.csv (" << credit.n_rows()
                  << " x " << credit.n_features() << ")\n";

        const Dataset distress = make_distress_surrogate(kDistressSeed);
        save_csv(distress, out_dir + "/financial_distress.csv");
        std::cout << "wrote " << out_dir << "/financial_distress.csv ("
                  << distress.n_rows() << " x " << distress.n_features() << ")\n";

        const Dataset cluster = make_cluster_outliers(950, 50, 6, kClusterSeed);
        save_csv(cluster, out_dir + "/cluster_outliers.csv");
        std::cout << "wrote " << out_dir << "/cluster_outliers.csv ("
                  << cluster.n_rows() << " x " << cluster.n_features() << ")\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
