// Regenerates the synthetic test corpus shipped under data/.

#include "rof/imaging.hpp"

#include <iostream>

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";
    try {
        rof::write_pgm_file(rof::synthetic_shapes(256), dir + "/shapes_256.pgm");
        rof::write_pgm_file(rof::synthetic_shapes(512), dir + "/shapes_512.pgm");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
