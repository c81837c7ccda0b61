// swid-registry: DID Document registry over HTTP.
//
//   swid-registry [--listen HOST:PORT] [--journal PATH]
//
// Environment: SWID_REGISTRY_LISTEN, SWID_REGISTRY_JOURNAL. Without a journal
// the registry lives in memory only. A port of 0 binds a free port; the
// bound address is printed on stdout once the server is listening.

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "swid/registry.hpp"

using namespace swid;

namespace {
registry::HttpServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}
} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Swarm DID Document registry"};
    std::string listen = "127.0.0.1:8080";
    std::string journal;
    app.add_option("--listen", listen, "Listen address HOST:PORT")->envname("SWID_REGISTRY_LISTEN");
    app.add_option("--journal", journal, "Append-only journal file for persistence")->envname("SWID_REGISTRY_JOURNAL");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto colon = listen.rfind(':');
        if (colon == std::string::npos) throw Error(Errc::invalid_argument, "--listen must be HOST:PORT");
        const std::string host = listen.substr(0, colon);
        const int port = std::stoi(listen.substr(colon + 1));

        std::unique_ptr<registry::Store> store;
        if (journal.empty())
            store = std::make_unique<registry::MemoryStore>();
        else
            store = std::make_unique<registry::JournalStore>(journal);
        registry::Registry reg(std::move(store));
        registry::HttpServer server(reg);
        const int bound = server.bind(host, port);

        g_server = &server;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        std::cout << "listening on http://" << host << ":" << bound << " (" << reg.size() << " records)" << std::endl;
        server.listen();
        g_server = nullptr;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
