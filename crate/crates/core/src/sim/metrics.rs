//! Run output: packet accounting, drop taxonomy and the CSV schema.

use crate::routing::DropReason;

/// Aggregated counters for one simulation run. Conservation holds by
/// construction: `generated = delivered + sum(drops) + in_flight_at_end`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMetrics {
    pub generated: u64,
    pub delivered: u64,
    pub drop_auth_failure: u64,
    pub drop_no_route: u64,
    pub drop_no_neighbors: u64,
    pub drop_ttl: u64,
    pub drop_blackhole: u64,
    /// Unicast transmissions whose target had moved out of range.
    pub drop_link_lost: u64,
    pub in_flight_at_end: u64,
    /// Mean hop count over delivered packets (0 when none were delivered).
    pub mean_hops: f64,
    /// Unordered neighbor pairs holding matching established keys at the
    /// end of the run.
    pub keys_established: u64,
    /// Delivered packets whose payload no longer matches what was sent.
    pub corrupted_delivered: u64,
    pub beacons_sent: u64,
    /// Fraction of the run the shared channel spent transmitting.
    pub channel_busy_fraction: f64,
    /// Data packets that arrived at adversary-controlled relays.
    pub adversary_relayed: u64,
}

impl RunMetrics {
    pub fn delivery_ratio(&self) -> f64 {
        if self.generated == 0 {
            0.0
        } else {
            self.delivered as f64 / self.generated as f64
        }
    }

    pub fn drops_total(&self) -> u64 {
        self.drop_auth_failure
            + self.drop_no_route
            + self.drop_no_neighbors
            + self.drop_ttl
            + self.drop_blackhole
            + self.drop_link_lost
    }

    pub(crate) fn count_drop(&mut self, reason: DropReason) {
        match reason {
            DropReason::AuthFailure => self.drop_auth_failure += 1,
            DropReason::NoRoute => self.drop_no_route += 1,
            DropReason::NoNeighbors => self.drop_no_neighbors += 1,
            DropReason::TtlExpired => self.drop_ttl += 1,
        }
    }

    /// The fixed CSV column order; the header row of [`RunMetrics::to_csv_row`].
    pub const CSV_HEADER: &'static str = "generated,delivered,delivery_ratio,\
drop_auth_failure,drop_no_route,drop_no_neighbors,drop_ttl,drop_blackhole,\
drop_link_lost,in_flight_at_end,mean_hops,keys_established,\
corrupted_delivered,beacons_sent,channel_busy_fraction,adversary_relayed";

    /// One CSV row in the documented column order. Floats print with fixed
    /// precision so identical runs emit identical bytes.
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{:.6},{},{},{},{},{},{},{},{:.6},{},{},{},{:.9},{}",
            self.generated,
            self.delivered,
            self.delivery_ratio(),
            self.drop_auth_failure,
            self.drop_no_route,
            self.drop_no_neighbors,
            self.drop_ttl,
            self.drop_blackhole,
            self.drop_link_lost,
            self.in_flight_at_end,
            self.mean_hops,
            self.keys_established,
            self.corrupted_delivered,
            self.beacons_sent,
            self.channel_busy_fraction,
            self.adversary_relayed,
        )
    }
}
