//! Deterministic discrete-event simulation of a secured geographic-routing
//! fleet: beaconing and key agreement, greedy/perimeter data forwarding with
//! per-hop signatures, pluggable adversaries, random-waypoint mobility, and
//! full packet accounting.
//!
//! Determinism contract: a scenario run twice produces bit-identical
//! metrics and event traces. Everything random flows from per-node
//! ChaCha streams derived from the scenario seed; events are processed in
//! (time, sequence) order; simulation time is integer nanoseconds.
//!
//! The radio is idealized: broadcasts reach every node within range, data
//! unicasts reach their target after a fixed per-hop latency, and the only
//! losses are adversarial (plus unicasts whose target moved out of range).
//! Channel load is reported as the fraction of run time spent transmitting
//! at a nominal 1 Mbit/s, which can exceed 1 under beacon flooding.

pub mod metrics;
pub mod scenario;

pub use metrics::RunMetrics;
pub use scenario::{GroupSpec, Mobility, Scenario, ScenarioError, TrafficFlow};

use crate::adversary::{apply_on_beacon, apply_on_relay, flood_schedule, AttackProfile, RelayAction};
use crate::crypto::{dh_generate, DhKeyPair, DhParams};
use crate::geo::{dist2, within_range, NodeId, Position};
use crate::neighbors::{expire_neighbors, handle_beacon, make_beacon_request, NeighborTable};
use crate::routing::{forward_decision, DropReason, ForwardAction, ForwardContext};
use crate::wire::{self, Command, GpsrPacket};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

/// Nominal channel bitrate used for airtime accounting.
const BITRATE_BPS: f64 = 1_000_000.0;

fn secs_to_ns(s: f64) -> u64 {
    (s * 1e9).round() as u64
}

fn ns_to_secs(ns: u64) -> f64 {
    ns as f64 / 1e9
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Independent per-node, per-purpose random stream. Mobility draws never
/// perturb crypto draws because each purpose gets its own stream.
fn substream(seed: u64, node: u32, purpose: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(
        seed ^ splitmix(u64::from(node).wrapping_add(purpose.wrapping_mul(0xA5A5_A5A5))),
    ))
}

const PURPOSE_CRYPTO: u64 = 1;
const PURPOSE_MOBILITY: u64 = 2;
const PURPOSE_BEHAVIOR: u64 = 3;
const PURPOSE_PLACEMENT: u64 = 4;

#[derive(Debug, Clone)]
struct TxMeta {
    /// Tracking id for data packets; beacons have none.
    uid: Option<u64>,
    hops: u32,
}

#[derive(Debug, Clone)]
enum EventKind {
    Beacon { node: usize },
    MobilityTick,
    Inject { flow: usize, seq: u32 },
    Arrival { to: usize, from: usize, bytes: Vec<u8>, meta: TxMeta },
}

struct SimNode {
    id: NodeId,
    pos: Position,
    advertised: Position,
    table: NeighborTable,
    keypair: Option<DhKeyPair>,
    profile: Option<AttackProfile>,
    beacon_interval: f64,
    behavior_rng: ChaCha8Rng,
    mobility_rng: ChaCha8Rng,
    wp_target: Position,
    wp_speed: f64,
    wp_pause_until: f64,
}

/// Random-waypoint stepping for one node: pause at each waypoint, then draw
/// a new target and speed and head there.
fn move_node(node: &mut SimNode, mobility: Mobility, area: (f64, f64), dt: f64, now: f64) {
    let Mobility::RandomWaypoint { speed_min, speed_max, pause } = mobility else {
        return;
    };
    if now < node.wp_pause_until {
        return;
    }
    let cur = node.pos;
    if cur == node.wp_target {
        // Arrived earlier: draw the next leg.
        node.wp_target = Position::from_meters(
            node.mobility_rng.gen_range(0.0..=area.0),
            node.mobility_rng.gen_range(0.0..=area.1),
        );
        node.wp_speed = if speed_max > speed_min {
            node.mobility_rng.gen_range(speed_min..=speed_max)
        } else {
            speed_min
        };
        node.wp_pause_until = now + pause;
        return;
    }
    let dx = node.wp_target.x_meters() - cur.x_meters();
    let dy = node.wp_target.y_meters() - cur.y_meters();
    let dist = (dx * dx + dy * dy).sqrt();
    let step = node.wp_speed * dt;
    if step >= dist || dist == 0.0 {
        node.pos = node.wp_target;
    } else {
        node.pos = Position::from_meters(
            cur.x_meters() + dx / dist * step,
            cur.y_meters() + dy / dist * step,
        );
    }
}

struct Engine<'a> {
    sc: &'a Scenario,
    params: Option<DhParams>,
    nodes: Vec<SimNode>,
    queue: BinaryHeap<Reverse<(u64, u64)>>,
    events: BTreeMap<(u64, u64), EventKind>,
    event_seq: u64,
    metrics: RunMetrics,
    originals: BTreeMap<u64, Vec<u8>>,
    outstanding: BTreeSet<u64>,
    next_uid: u64,
    hop_sum: u64,
    busy_seconds: f64,
    bait: Position,
    trace: Option<String>,
    now: u64,
}

impl Engine<'_> {
    fn push(&mut self, time: u64, kind: EventKind) {
        let key = (time, self.event_seq);
        self.event_seq += 1;
        self.queue.push(Reverse(key));
        self.events.insert(key, kind);
    }

    fn trace_line(&mut self, line: String) {
        if let Some(buf) = self.trace.as_mut() {
            buf.push_str(&line);
            buf.push('\n');
        }
    }

    fn airtime(&mut self, bytes: usize) {
        self.busy_seconds += bytes as f64 * 8.0 / BITRATE_BPS;
    }

    /// Sends a beacon to every node in range (true positions).
    fn broadcast(&mut self, from: usize, pkt: &GpsrPacket) {
        let bytes = wire::encode(pkt).expect("beacons are valid packets");
        self.airtime(bytes.len());
        self.metrics.beacons_sent += 1;
        let from_pos = self.nodes[from].pos;
        let arrival = self.now + secs_to_ns(self.sc.per_hop_latency);
        for to in 0..self.nodes.len() {
            if to == from {
                continue;
            }
            if within_range(from_pos, self.nodes[to].pos, self.sc.radio_range) {
                self.push(
                    arrival,
                    EventKind::Arrival {
                        to,
                        from,
                        bytes: bytes.clone(),
                        meta: TxMeta { uid: None, hops: 0 },
                    },
                );
            }
        }
    }

    /// Sends a data packet to one neighbor; the link can have gone stale
    /// under mobility.
    fn unicast(&mut self, from: usize, to: usize, pkt: &GpsrPacket, meta: TxMeta) {
        let bytes = wire::encode(pkt).expect("forwarded packets stay valid");
        self.airtime(bytes.len());
        if within_range(self.nodes[from].pos, self.nodes[to].pos, self.sc.radio_range) {
            let uid = meta.uid.map(|u| u.to_string()).unwrap_or_default();
            let hops = meta.hops;
            let now = self.now;
            let cmd = pkt.command;
            self.push(
                self.now + secs_to_ns(self.sc.per_hop_latency),
                EventKind::Arrival { to, from, bytes, meta },
            );
            self.trace_line(format!(
                "t={now} tx cmd={cmd} from={from} to={to} uid={uid} hops={hops}"
            ));
        } else {
            self.metrics.drop_link_lost += 1;
            if let Some(uid) = meta.uid {
                self.outstanding.remove(&uid);
            }
            let now = self.now;
            self.trace_line(format!("t={now} link-lost from={from} to={to}"));
        }
    }

    fn finish_packet_drop(&mut self, uid: u64, at: usize, reason: DropReason) {
        self.metrics.count_drop(reason);
        self.outstanding.remove(&uid);
        let now = self.now;
        self.trace_line(format!(
            "t={now} drop uid={uid} at={at} reason={}",
            reason.as_str()
        ));
    }

    /// Runs the forwarding decision for a data packet sitting at `node`,
    /// whether freshly injected (`upstream` None) or received off the air.
    fn route_data(&mut self, node: usize, pkt: &GpsrPacket, upstream: Option<usize>, meta: TxMeta) {
        let uid = meta.uid.expect("data packets carry a uid");

        if meta.hops >= self.sc.effective_hop_cap() {
            self.finish_packet_drop(uid, node, DropReason::TtlExpired);
            return;
        }

        let ctx = ForwardContext {
            self_id: self.nodes[node].id,
            self_pos: self.nodes[node].pos,
            table: &self.nodes[node].table,
            upstream: upstream.map(|u| self.nodes[u].id),
            security_on: self.sc.security_on,
            radio_range: self.sc.radio_range,
        };

        match forward_decision(&ctx, pkt) {
            ForwardAction::Deliver => {
                self.metrics.delivered += 1;
                self.hop_sum += u64::from(meta.hops);
                let intact = self
                    .originals
                    .get(&uid)
                    .map(|d| d == &pkt.data)
                    .unwrap_or(false);
                if !intact {
                    self.metrics.corrupted_delivered += 1;
                }
                self.outstanding.remove(&uid);
                let now = self.now;
                let hops = meta.hops;
                self.trace_line(format!(
                    "t={now} deliver uid={uid} at={node} hops={hops} corrupted={}",
                    !intact
                ));
            }
            ForwardAction::Drop(reason) => self.finish_packet_drop(uid, node, reason),
            ForwardAction::Forward { next_hop, packet } => {
                // Strict-progress law for greedy forwards, on the positions
                // the node actually believes (spoofed beacons shift belief,
                // not this law). Stays on in adversarial runs.
                if packet.command == Command::GreedyData {
                    let believed = self.nodes[node]
                        .table
                        .get(next_hop)
                        .expect("chosen from table")
                        .pos;
                    assert!(
                        dist2(believed, packet.dest_pos)
                            < dist2(self.nodes[node].pos, packet.dest_pos),
                        "greedy forward must make strict progress"
                    );
                }

                // Relay-side adversary hook: tampering and dropping happen
                // to the outgoing, already-signed transmission.
                let outgoing = match (&self.nodes[node].profile, upstream) {
                    (Some(profile), Some(_)) => {
                        let profile = profile.clone();
                        match apply_on_relay(&profile, &packet, &mut self.nodes[node].behavior_rng)
                        {
                            RelayAction::Drop => {
                                self.metrics.drop_blackhole += 1;
                                self.outstanding.remove(&uid);
                                let now = self.now;
                                self.trace_line(format!("t={now} blackhole uid={uid} at={node}"));
                                return;
                            }
                            RelayAction::ForwardModified(p) => p,
                            RelayAction::ForwardUnchanged => packet,
                        }
                    }
                    _ => packet,
                };

                let to = next_hop as usize; // node ids are dense 0..n
                self.unicast(
                    node,
                    to,
                    &outgoing,
                    TxMeta {
                        uid: Some(uid),
                        hops: meta.hops + 1,
                    },
                );
            }
        }
    }

    fn on_arrival(&mut self, to: usize, from: usize, bytes: &[u8], meta: TxMeta) {
        let Ok(pkt) = wire::decode(bytes) else {
            debug_assert!(false, "simulated nodes only emit decodable packets");
            return;
        };
        if pkt.command.is_beacon() {
            let now_s = ns_to_secs(self.now);
            let from_id = self.nodes[from].id;
            let self_advertised = self.nodes[to].advertised;
            let node = &mut self.nodes[to];
            let dh = match (&self.params, &node.keypair) {
                (Some(p), Some(k)) => Some((p, k)),
                _ => None,
            };
            let reply = handle_beacon(&mut node.table, dh, &pkt, from_id, self_advertised, now_s);
            if let Some(reply) = reply {
                self.broadcast(to, &reply);
            }
        } else {
            if self.nodes[to].profile.is_some() {
                self.metrics.adversary_relayed += 1;
            }
            self.route_data(to, &pkt, Some(from), meta);
        }
    }

    fn on_beacon_timer(&mut self, node: usize) {
        let now_s = ns_to_secs(self.now);
        expire_neighbors(&mut self.nodes[node].table, now_s);

        let advertised = match &self.nodes[node].profile {
            Some(profile) => apply_on_beacon(profile, self.nodes[node].pos, Some(self.bait)),
            None => self.nodes[node].pos,
        };
        self.nodes[node].advertised = advertised;

        let pkt = make_beacon_request(advertised, self.nodes[node].keypair.as_ref())
            .expect("group size checked during validation");
        let now = self.now;
        self.trace_line(format!(
            "t={now} beacon node={node} x={} y={}",
            advertised.x, advertised.y
        ));
        self.broadcast(node, &pkt);

        let next = self.now + secs_to_ns(self.nodes[node].beacon_interval);
        self.push(next, EventKind::Beacon { node });
    }

    fn on_inject(&mut self, flow_idx: usize, seq: u32) {
        let flow = &self.sc.traffic[flow_idx];
        let source = flow.source as usize;
        let dest = flow.dest as usize;

        let uid = self.next_uid;
        self.next_uid += 1;
        let payload = deterministic_payload(flow_idx as u64, u64::from(seq), flow.payload);

        let mut pkt = GpsrPacket::new(Command::GreedyData);
        pkt.source_pos = self.nodes[source].pos;
        // Position addressing: the injector knows the destination's current
        // position (location-service assumption).
        pkt.dest_pos = self.nodes[dest].pos;
        pkt.data = payload.clone();

        self.metrics.generated += 1;
        self.originals.insert(uid, payload);
        self.outstanding.insert(uid);
        let now = self.now;
        self.trace_line(format!(
            "t={now} inject uid={uid} flow={flow_idx} seq={seq} src={source} dest={dest}"
        ));

        self.route_data(
            source,
            &pkt,
            None,
            TxMeta {
                uid: Some(uid),
                hops: 0,
            },
        );
    }

    fn on_mobility_tick(&mut self) {
        let now_s = ns_to_secs(self.now);
        let area = (self.sc.area_width, self.sc.area_height);
        let mobility = self.sc.mobility;
        let dt = self.sc.mobility_tick;
        for node in &mut self.nodes {
            move_node(node, mobility, area, dt, now_s);
        }
        let next = self.now + secs_to_ns(self.sc.mobility_tick);
        self.push(next, EventKind::MobilityTick);
    }
}

/// Deterministic per-packet payload: identifiable, incompressible filler.
fn deterministic_payload(flow: u64, seq: u64, len: usize) -> Vec<u8> {
    let mut state = splitmix(flow.wrapping_mul(0x1000_0001).wrapping_add(seq));
    (0..len)
        .map(|_| {
            state = splitmix(state);
            (state & 0xFF) as u8
        })
        .collect()
}

/// Runs a scenario to completion.
pub fn run(sc: &Scenario) -> Result<RunMetrics, ScenarioError> {
    run_inner(sc, false).map(|(m, _)| m)
}

/// Runs a scenario and also returns the line-oriented event trace.
pub fn run_with_trace(sc: &Scenario) -> Result<(RunMetrics, String), ScenarioError> {
    run_inner(sc, true).map(|(m, t)| (m, t.unwrap_or_default()))
}

fn build_params(sc: &Scenario) -> Result<Option<DhParams>, Vec<String>> {
    if !sc.security_on {
        return Ok(None);
    }
    let params = match &sc.dh_group {
        GroupSpec::Named(name) => DhParams::named(name).map_err(|e| vec![e.to_string()])?,
        GroupSpec::Explicit { p_hex, w_hex } => {
            DhParams::from_hex(p_hex, w_hex).map_err(|e| vec![e.to_string()])?
        }
    };
    // Publics must fit the beacon data field.
    if params.element_len() + 2 > wire::MAX_DATA_LEN {
        return Err(vec![format!(
            "dh group public values need {} bytes; beacons carry at most {}",
            params.element_len() + 2,
            wire::MAX_DATA_LEN
        )]);
    }
    Ok(Some(params))
}

/// The node positions a scenario starts from: explicit placements where
/// given, otherwise seed-derived uniform draws. Exposed so connectivity
/// oracles can inspect the same topology the run will use.
pub fn placement_positions(sc: &Scenario) -> Vec<Position> {
    let mut rng = substream(sc.seed, u32::MAX, PURPOSE_PLACEMENT);
    let mut taken: BTreeSet<(i32, i32)> = BTreeSet::new();
    let mut positions = Vec::with_capacity(sc.node_count as usize);
    for id in 0..sc.node_count {
        let pos = match sc.placements.get(&id) {
            Some(&(x, y)) => Position::from_meters(x, y),
            None => loop {
                let candidate = Position::from_meters(
                    rng.gen_range(0.0..=sc.area_width),
                    rng.gen_range(0.0..=sc.area_height),
                );
                if !taken.contains(&(candidate.x, candidate.y)) {
                    break candidate;
                }
            },
        };
        taken.insert((pos.x, pos.y));
        positions.push(pos);
    }
    positions
}

fn run_inner(
    sc: &Scenario,
    want_trace: bool,
) -> Result<(RunMetrics, Option<String>), ScenarioError> {
    let mut issues = sc.bound_violations();
    let params = match build_params(sc) {
        Ok(p) => p,
        Err(mut group_issues) => {
            issues.append(&mut group_issues);
            None
        }
    };
    if !issues.is_empty() {
        return Err(ScenarioError { issues });
    }

    let positions = placement_positions(sc);
    let profiles: BTreeMap<NodeId, AttackProfile> = sc.adversaries.iter().cloned().collect();

    let nodes: Vec<SimNode> = (0..sc.node_count)
        .map(|id| {
            let keypair = params
                .as_ref()
                .map(|p| dh_generate(p, &mut substream(sc.seed, id, PURPOSE_CRYPTO)));
            let profile = profiles.get(&id).cloned();
            let beacon_interval = profile
                .as_ref()
                .map(|p| flood_schedule(p, sc.beacon_interval))
                .unwrap_or(sc.beacon_interval);
            let pos = positions[id as usize];
            SimNode {
                id,
                pos,
                advertised: pos,
                table: NeighborTable::new(sc.beacon_interval, sc.neighbor_timeout),
                keypair,
                profile,
                beacon_interval,
                behavior_rng: substream(sc.seed, id, PURPOSE_BEHAVIOR),
                mobility_rng: substream(sc.seed, id, PURPOSE_MOBILITY),
                wp_target: pos,
                wp_speed: 0.0,
                wp_pause_until: 0.0,
            }
        })
        .collect();

    let bait = match sc.spoof_bait {
        Some((x, y)) => Position::from_meters(x, y),
        None => Position::from_meters(sc.area_width / 2.0, sc.area_height / 2.0),
    };

    let mut engine = Engine {
        sc,
        params,
        nodes,
        queue: BinaryHeap::new(),
        events: BTreeMap::new(),
        event_seq: 0,
        metrics: RunMetrics::default(),
        originals: BTreeMap::new(),
        outstanding: BTreeSet::new(),
        next_uid: 0,
        hop_sum: 0,
        busy_seconds: 0.0,
        bait,
        trace: want_trace.then(String::new),
        now: 0,
    };

    // Initial schedule: staggered first beacons, mobility ticks, traffic.
    for node in 0..engine.nodes.len() {
        engine.push(secs_to_ns(node as f64 * 1e-3), EventKind::Beacon { node });
    }
    if matches!(sc.mobility, Mobility::RandomWaypoint { .. }) {
        engine.push(secs_to_ns(sc.mobility_tick), EventKind::MobilityTick);
    }
    for (flow_idx, flow) in sc.traffic.iter().enumerate() {
        for seq in 0..flow.count {
            let t = flow.start + flow.interval * f64::from(seq);
            engine.push(secs_to_ns(t), EventKind::Inject { flow: flow_idx, seq });
        }
    }

    let horizon = secs_to_ns(sc.duration);
    while let Some(Reverse(key)) = engine.queue.pop() {
        if key.0 > horizon {
            break;
        }
        engine.now = key.0;
        let kind = engine.events.remove(&key).expect("event bodies follow keys");
        match kind {
            EventKind::Beacon { node } => engine.on_beacon_timer(node),
            EventKind::MobilityTick => engine.on_mobility_tick(),
            EventKind::Inject { flow, seq } => engine.on_inject(flow, seq),
            EventKind::Arrival { to, from, bytes, meta } => {
                engine.on_arrival(to, from, &bytes, meta)
            }
        }
    }

    // Key agreement accounting: count unordered pairs where both ends hold
    // the (identical) key.
    let mut keys = 0u64;
    for u in 0..engine.nodes.len() {
        for v in u + 1..engine.nodes.len() {
            let ku = engine.nodes[u].table.key_for(engine.nodes[v].id);
            let kv = engine.nodes[v].table.key_for(engine.nodes[u].id);
            if let (Some(ku), Some(kv)) = (ku, kv) {
                assert_eq!(ku, kv, "nodes {u} and {v} disagree on their pairwise key");
                keys += 1;
            }
        }
    }
    engine.metrics.keys_established = keys;
    engine.metrics.in_flight_at_end = engine.outstanding.len() as u64;
    engine.metrics.mean_hops = if engine.metrics.delivered == 0 {
        0.0
    } else {
        engine.hop_sum as f64 / engine.metrics.delivered as f64
    };
    engine.metrics.channel_busy_fraction = engine.busy_seconds / sc.duration;

    // Conservation: every generated packet is accounted for exactly once.
    assert_eq!(
        engine.metrics.generated,
        engine.metrics.delivered + engine.metrics.drops_total() + engine.metrics.in_flight_at_end,
        "packet conservation violated"
    );

    let trace = engine.trace.take();
    Ok((engine.metrics, trace))
}
