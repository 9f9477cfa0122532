#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "spot/net/endpoint.hpp"
#include "spot/net/udp.hpp"
#include "spot/sync.hpp"
#include "spot/time.hpp"
#include "spot/wire.hpp"

namespace spot::net {

/// STL allocator that charges every allocation to a shared byte counter,
/// so the server can report how much memory its client bookkeeping uses.
template <class T>
struct CountingAllocator {
  using value_type = T;

  std::atomic<size_t>* counter = nullptr;

  CountingAllocator() = default;
  explicit CountingAllocator(std::atomic<size_t>* c) : counter(c) {}
  template <class U>
  CountingAllocator(const CountingAllocator<U>& o) : counter(o.counter) {}

  T* allocate(size_t n) {
    if (counter) counter->fetch_add(n * sizeof(T), std::memory_order_relaxed);
    return std::allocator<T>().allocate(n);
  }
  void deallocate(T* p, size_t n) {
    if (counter) counter->fetch_sub(n * sizeof(T), std::memory_order_relaxed);
    std::allocator<T>().deallocate(p, n);
  }

  template <class U>
  bool operator==(const CountingAllocator<U>& o) const {
    return counter == o.counter;
  }
};

struct ServerConfig {
  uint16_t port = wire::kDefaultPort;
  size_t max_clients = 1'000'000;
  PollingPolicy thin_policy;                        // style overridden per registration
  TimeSpan probe_timeout = TimeSpan::seconds(1);
  int probe_retries = 2;                            // resends after the first attempt
  int eviction_failures = 3;                        // consecutive failed cycles
  int max_probes_per_poll = 256;                    // paces bursts of due probes
  bool keep_adjust_log = false;
};

struct ServerStats {
  uint64_t thick_served = 0;
  uint64_t registrations = 0;
  uint64_t registrations_rejected = 0;
  uint64_t probes_sent = 0;
  uint64_t probe_retries = 0;
  uint64_t adjusts_sent = 0;
  uint64_t cycles_failed = 0;
  uint64_t evictions = 0;
  uint64_t stray_datagrams = 0;
  TimeSpan max_probe_jitter;  // worst (actual - due) probe dispatch delay
};

/// One row of the optional server-side sync log.
struct AdjustLogRow {
  TimePoint time;
  uint64_t client_id = 0;
  TimeSpan offset;
  Skew skew;
  TimeSpan next_poll;
  SampleQuality quality = SampleQuality::high;
};

/// An encoded datagram the core wants sent.
struct Outgoing {
  Endpoint to;
  std::vector<uint8_t> payload;
};

/// Protocol brain of the server, free of sockets and threads.
///
/// The surrounding shell feeds in datagrams with their receive timestamps
/// and periodically calls poll_due(); both return the datagrams to send.
/// Thick requests are answered statelessly. Thin clients get a registry
/// entry with their own SyncState and one pending probe-schedule slot; the
/// server runs their three-message probe cycle and pushes the result back
/// in an ADJUST.
class ServerCore {
 public:
  using Clock = std::function<TimePoint()>;

  explicit ServerCore(ServerConfig cfg, Clock clock = steady_now);

  void handle_datagram(std::span<const uint8_t> bytes, const Endpoint& from, TimePoint recv_time,
                       std::vector<Outgoing>& out);

  /// Dispatches due probes (bounded by max_probes_per_poll) and expires
  /// pending probes: a probe unanswered after probe_timeout is resent up to
  /// probe_retries times; a cycle with every attempt lost counts as failed,
  /// and eviction_failures consecutive failed cycles unschedule the client
  /// until it registers again.
  void poll_due(TimePoint now, std::vector<Outgoing>& out);

  /// Earliest instant at which poll_due has work, if any.
  std::optional<TimePoint> next_deadline() const;

  const ServerStats& stats() const { return stats_; }
  size_t thin_client_count() const;
  size_t registry_size() const { return registry_.size(); }

  /// Bytes currently allocated for client bookkeeping (registry + queues).
  size_t memory_bytes() const { return mem_bytes_.load(std::memory_order_relaxed); }

  /// Read-only view of a client's sync state (tests / diagnostics).
  const SyncState* client_state(uint64_t client_id) const;
  bool client_scheduled(uint64_t client_id) const;

  std::vector<AdjustLogRow> take_adjust_log();

 private:
  struct ClientEntry {
    wire::RegisterBody reg;
    Endpoint addr;
    TimePoint last_seen;
    std::optional<SyncState> state;  // thin clients only
    uint64_t generation = 0;         // invalidates stale schedule entries
    bool unresponsive = false;
    // In-flight probe cycle.
    bool pending = false;
    uint32_t pending_seq = 0;
    TimePoint probe_sent_at;
    int attempts = 0;
    int consecutive_failures = 0;
  };

  struct ScheduleItem {
    TimePoint due;
    uint64_t client_id;
    uint64_t generation;
    bool operator>(const ScheduleItem& o) const { return due > o.due; }
  };

  struct PendingDeadline {
    TimePoint deadline;
    uint64_t client_id;
    uint32_t seq;
    bool operator>(const PendingDeadline& o) const { return deadline > o.deadline; }
  };

  template <class T>
  using MinHeap = std::priority_queue<T, std::vector<T, CountingAllocator<T>>, std::greater<T>>;

  void handle_thick(const wire::Message& m, const Endpoint& from, TimePoint recv_time,
                    std::vector<Outgoing>& out);
  void handle_register(const wire::Message& m, const Endpoint& from, TimePoint recv_time,
                       std::vector<Outgoing>& out);
  void handle_probe_resp(const wire::Message& m, TimePoint recv_time, std::vector<Outgoing>& out);
  void send_probe(uint64_t client_id, ClientEntry& e, TimePoint now, std::vector<Outgoing>& out);
  void schedule(uint64_t client_id, ClientEntry& e, TimePoint due);

  ServerConfig cfg_;
  Clock clock_;
  ServerStats stats_;
  std::atomic<size_t> mem_bytes_{0};

  using Registry =
      std::unordered_map<uint64_t, ClientEntry, std::hash<uint64_t>, std::equal_to<uint64_t>,
                         CountingAllocator<std::pair<const uint64_t, ClientEntry>>>;
  Registry registry_;
  MinHeap<ScheduleItem> schedule_;
  MinHeap<PendingDeadline> pending_;

  uint64_t next_assigned_id_ = 1ull << 32;  // ids handed to clients that register with id 0
  uint32_t next_seq_ = 0;
  std::vector<AdjustLogRow> adjust_log_;
};

/// UDP front end: binds a socket and pumps ServerCore on its own thread.
class UdpServer {
 public:
  explicit UdpServer(ServerConfig cfg);
  ~UdpServer();

  void start();
  void stop();

  uint16_t port() const { return sock_.local_port(); }
  Endpoint endpoint() const { return loopback(port()); }

  ServerStats stats() const;
  size_t thin_client_count() const;
  size_t memory_bytes() const;
  std::vector<AdjustLogRow> take_adjust_log();

 private:
  void run_loop();

  ServerConfig cfg_;
  UdpSocket sock_;
  mutable std::mutex mu_;
  ServerCore core_;
  std::thread loop_;
  std::atomic<bool> running_{false};
};

}  // namespace spot::net
