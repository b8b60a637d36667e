// model.hpp — System, sink, and run specifications plus the single-excitation state layout

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spintrans {

// Thrown when a run violates a structural invariant mid-flight (trace, positivity, ...).
class invariant_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// N identical XY chains with uniform nearest-neighbor coupling, sharing one reservoir.
// Chain 1 is the transport channel; chains 2..N are auxiliary. All frequencies are in
// units of omega0, times in 1/omega0.
struct SystemSpec {
    int n_chains{1};                  // N
    int chain_len{1};                 // M
    double omega0{1.0};
    double j_coupling{0.1};           // J
    int r_index{1};                   // which chain eigenmode couples to the reservoir
    std::vector<double> omega_big{};  // per-chain collective reservoir couplings Omega_j

    // Uniform coupling Omega_j = omega_big0 for every chain.
    static SystemSpec uniform(int n_chains, int chain_len, double omega_big0);
};

// Irreversible trap fed from one site of chain 1.
struct SinkSpec {
    double gamma_sink{0.0};
    int attach_site{1};  // site index on chain 1; loaders default this to chain_len

    static SinkSpec at_end(const SystemSpec& spec, double gamma_sink);
};

struct RunConfig {
    double t_final{0.0};
    int sample_count{1001};
    double abs_tol{1e-9};
    double rel_tol{1e-9};
    int initial_site{1};  // initially excited site of chain 1
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string joined(const std::string& sep = "; ") const;
};

ValidationReport validate_spec(const SystemSpec& spec, const SinkSpec& sink);
ValidationReport validate_run(const RunConfig& run);

// Canonical enumeration of the single-excitation sector:
//   0                      global ground
//   1 .. N*M               sites, (j,l) -> (j-1)*M + l
//   N*M+1 .. N*M+P         pseudomode excitations
//   N*M+P+1                sink
// The same layout indexes chain eigenmodes when a matrix is tagged with the eigen basis.
struct StateLayout {
    int n_chains{1};
    int chain_len{1};
    int n_pseudomodes{1};

    int dim() const { return n_chains * chain_len + n_pseudomodes + 2; }
    int ground() const { return 0; }
    int site(int chain, int site) const;          // 1-based (j, l)
    int pseudomode(int mode) const;               // 1-based
    int sink() const { return dim() - 1; }
    int n_sites() const { return n_chains * chain_len; }

    enum class Kind { Ground, Site, Pseudomode, Sink };
    struct Decoded {
        Kind kind;
        int chain{0};  // 1-based, Site only
        int site{0};   // 1-based, Site only
        int mode{0};   // 1-based, Pseudomode only
    };
    Decoded decode(int index) const;
};

// D = N*M + P + 2. Throws std::invalid_argument on an invalid spec or P < 1.
int state_dimension(const SystemSpec& spec, int n_pseudomodes);

}  // namespace spintrans
