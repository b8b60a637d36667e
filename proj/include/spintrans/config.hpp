// config.hpp — JSON scenario files: schema, strict parsing, overrides

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "spintrans/model.hpp"
#include "spintrans/spectral.hpp"

namespace spintrans {

// Raised for unreadable files, malformed JSON, unknown keys, wrong types, and
// values that fail validation. Messages carry the offending key path.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A fully specified run: everything the engine needs, nothing implicit.
struct Scenario {
    SystemSpec system;
    SinkSpec sink;
    SpectralDensity reservoir;
    RunConfig run;
    std::vector<std::string> warnings;  // non-fatal notes (e.g. normalization rescale)
};

// "a.b.c=value" pairs from the command line; applied after the file is read,
// before validation. Paths must name keys the schema knows.
struct Override {
    std::string path;
    std::string value;
};

Override parse_override(const std::string& text);

// Reads a scenario file (JSON, '//' comments allowed), applies overrides, and
// validates the result. Any schema violation throws config_error.
Scenario load_scenario(const std::string& path, const std::vector<Override>& overrides = {});

// Same, but from an in-memory JSON string (path only labels error messages).
Scenario parse_scenario(const std::string& text, const std::string& label = "<string>",
                        const std::vector<Override>& overrides = {});

}  // namespace spintrans
