// Standalone corpus-count HTTP service backed by a directory of text files.
// GET /count?mode={exact|soft}&q=... returns {"count": N}.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "bookmem/providers.hpp"

int main(int argc, char** argv) {
    CLI::App app{"corpus-count mock service"};
    std::string dir;
    int port = 8700;
    app.add_option("--dir", dir, "directory of UTF-8 text files to index")->required();
    app.add_option("--port", port)->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    bookmem::MockCorpus corpus;
    try {
        corpus.load_directory(dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    const auto server = bookmem::MockServer::serve_corpus(corpus, port);
    std::cout << "listening on port " << server->port() << "\n" << std::flush;
    for (;;) std::this_thread::sleep_for(std::chrono::seconds(1));
}
