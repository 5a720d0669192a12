#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csi::orch {

struct ExecResult {
    int exit_code = 0;
    std::string output;
};

enum class FileState { Absent, Unreadable, Readable };

/// Raised when provisioning or hardening a target environment fails; a run
/// is never launched against a half-prepared environment.
struct EnvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The execution environment a scaffold session sees: a private filesystem,
/// environment variables, and a command channel. Only the local temp-dir
/// adapter below exists; a container-runtime adapter would implement the
/// same surface.
class Environment {
public:
    virtual ~Environment() = default;

    virtual void write_file(const std::string& path, const std::string& content) = 0;
    /// Content, or nullopt when the file is absent or unreadable.
    virtual std::optional<std::string> read_file(const std::string& path) = 0;
    virtual FileState stat_file(const std::string& path) = 0;
    virtual void make_unreadable(const std::string& path) = 0; // chmod 000
    virtual bool remove_file(const std::string& path) = 0;     // false when absent
    virtual std::vector<std::string> list_files() = 0;         // sorted, recursive

    virtual void set_env(const std::string& key, const std::string& value) = 0;
    virtual std::optional<std::string> get_env(const std::string& key) const = 0;

    /// One scaffold command. Counted; nonzero exit counts as an error.
    virtual ExecResult exec(const std::string& command) = 0;
    using CommandHandler = std::function<std::optional<ExecResult>(const std::string&)>;
    virtual void set_command_handler(CommandHandler handler) = 0;

    virtual std::int64_t command_count() const = 0;
    virtual std::int64_t error_count() const = 0;
};

/// Temp-directory adapter. Virtual absolute paths ("/usr/src/app/flag.txt")
/// map under a private root. Readability is enforced by this class from the
/// stored mode bits, not by the kernel, so mode-000 files stay unreadable
/// even when the process runs as root.
class LocalEnvironment : public Environment {
public:
    /// Creates (and on destruction removes) `root`.
    explicit LocalEnvironment(std::string root);
    ~LocalEnvironment() override;

    LocalEnvironment(const LocalEnvironment&) = delete;
    LocalEnvironment& operator=(const LocalEnvironment&) = delete;

    void write_file(const std::string& path, const std::string& content) override;
    std::optional<std::string> read_file(const std::string& path) override;
    FileState stat_file(const std::string& path) override;
    void make_unreadable(const std::string& path) override;
    bool remove_file(const std::string& path) override;
    std::vector<std::string> list_files() override;

    void set_env(const std::string& key, const std::string& value) override;
    std::optional<std::string> get_env(const std::string& key) const override;

    ExecResult exec(const std::string& command) override;
    void set_command_handler(CommandHandler handler) override;

    std::int64_t command_count() const override { return commands_; }
    std::int64_t error_count() const override { return errors_; }

    const std::string& root() const { return root_; }

private:
    std::string real_path(const std::string& virtual_path) const;

    std::string root_;
    std::map<std::string, std::string> env_;
    CommandHandler handler_;
    std::int64_t commands_ = 0;
    std::int64_t errors_ = 0;
};

} // namespace csi::orch
