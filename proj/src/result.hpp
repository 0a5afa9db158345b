#pragma once

#include <cassert>
#include <optional>
#include <string>
#include <utility>

namespace forge {

enum class Err {
    None = 0,
    CrossPlatform,
    IdentityMismatch,
    Corrupt,
    UnknownInstance,
    AttestationFailed,
    SessionError,
    NotFound,
    IntegrityError,
    StaleSnapshot,
    IndexMismatch,
    UnsealError,
    BackendError,
    RegistryRejected,
    ConfigError,
    GeometryError,
    InsufficientTrace,
    DegenerateLabels,
};

const char* err_name(Err e);

template <class T>
class Result {
public:
    Result(T value) : value_(std::move(value)), err_(Err::None) {}
    Result(Err e) : err_(e) { assert(e != Err::None); }

    bool ok() const { return err_ == Err::None; }
    explicit operator bool() const { return ok(); }
    Err error() const { return err_; }

    const T& value() const {
        assert(ok());
        return *value_;
    }
    T& value() {
        assert(ok());
        return *value_;
    }
    T take() {
        assert(ok());
        return std::move(*value_);
    }

private:
    std::optional<T> value_;
    Err err_;
};

// Operation with no payload.
class Status {
public:
    Status() : err_(Err::None) {}
    Status(Err e) : err_(e) {}
    bool ok() const { return err_ == Err::None; }
    explicit operator bool() const { return ok(); }
    Err error() const { return err_; }

private:
    Err err_;
};

}  // namespace forge
