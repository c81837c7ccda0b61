#include <httplib.h>

#include "swid/registry.hpp"

namespace swid::registry {

namespace {

constexpr const char* kCoseMediaType = "application/cose";
constexpr const char* kCborMediaType = "application/cbor";
constexpr const char* kDidJsonMediaType = "application/did+json";

void reply_error(httplib::Response& res, const Error& e) {
    res.status = http_status(e.code());
    res.set_content(std::string(to_string(e.code())), "text/plain");
}

Errc errc_from_token(const std::string& token, int status) {
    for (auto code : {Errc::malformed_payload, Errc::kid_mismatch, Errc::bad_signature, Errc::duplicate_did,
                      Errc::not_found, Errc::bad_format, Errc::wrong_method, Errc::invalid_base58,
                      Errc::bad_nsi_length})
        if (to_string(code) == token) return code;
    if (status == 404) return Errc::not_found;
    if (status == 409) return Errc::duplicate_did;
    if (status == 401) return Errc::bad_signature;
    return Errc::network;
}

[[noreturn]] void raise(const httplib::Result& res, const std::string& what) {
    if (!res) throw Error(Errc::network, what + ": " + httplib::to_string(res.error()));
    throw Error(errc_from_token(res->body, res->status),
                what + ": HTTP " + std::to_string(res->status) + " " + res->body);
}

} // namespace

HttpServer::HttpServer(Registry& registry) : registry_(registry), server_(std::make_unique<httplib::Server>()) {
    server_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });

    server_->Post("/dids", [this](const httplib::Request& req, httplib::Response& res) {
        if (req.has_header("Content-Type") && req.get_header_value("Content-Type") != kCoseMediaType) {
            reply_error(res, Error(Errc::malformed_payload, "expected application/cose"));
            return;
        }
        try {
            const auto did = registry_.register_envelope(to_bytes(req.body));
            res.status = 201;
            res.set_content(did.to_text(), "text/plain");
        } catch (const Error& e) {
            reply_error(res, e);
        }
    });

    server_->Get("/dids/:did", [this](const httplib::Request& req, httplib::Response& res) {
        try {
            const auto did = SwarmDid::parse(req.path_params.at("did"));
            const auto format = req.has_param("format") ? parse_wire_format(req.get_param_value("format"))
                                                        : WireFormat::cbor_di;
            const Bytes body = registry_.resolve(did, format);
            res.status = 200;
            res.set_content(std::string(body.begin(), body.end()),
                            format == WireFormat::json ? kDidJsonMediaType : kCborMediaType);
        } catch (const Error& e) {
            reply_error(res, e);
        }
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = server_->bind_to_any_port(host);
        if (bound < 0) throw Error(Errc::network, "cannot bind " + host);
        return bound;
    }
    if (!server_->bind_to_port(host, port)) throw Error(Errc::network, "cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::start() {
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void HttpServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

Client::Client(std::string base_url) : base_url_(std::move(base_url)) {
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

SwarmDid Client::register_envelope(ByteView envelope) const {
    httplib::Client cli(base_url_);
    auto res = cli.Post("/dids", reinterpret_cast<const char*>(envelope.data()), envelope.size(), kCoseMediaType);
    if (!res || res->status != 201) raise(res, "register failed");
    return SwarmDid::parse(res->body);
}

Bytes Client::resolve(const SwarmDid& did, WireFormat format) const {
    httplib::Client cli(base_url_);
    auto res = cli.Get("/dids/" + did.to_text() + "?format=" + std::string(to_string(format)));
    if (!res || res->status != 200) raise(res, "resolve failed");
    return to_bytes(res->body);
}

bool Client::healthy() const {
    httplib::Client cli(base_url_);
    auto res = cli.Get("/healthz");
    return res && res->status == 200;
}

} // namespace swid::registry
