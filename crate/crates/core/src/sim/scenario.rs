//! Simulation input: a flat `key = value` scenario format, its parser, and
//! bound validation that reports every violation at once.
//!
//! ```text
//! # two nodes exchanging ten packets
//! seed = 42
//! area_width = 500
//! area_height = 300
//! node_count = 2
//! radio_range = 120
//! duration = 5.0
//! security_on = true
//! dh_group = test256
//! node[0].x = 100        # explicit placement (otherwise drawn from seed)
//! node[0].y = 150
//! traffic[0].source = 0
//! traffic[0].dest = 1
//! traffic[0].start = 2.0
//! traffic[0].count = 10
//! traffic[0].interval = 0.2
//! traffic[0].payload = 64
//! adversaries[0].node = 1
//! adversaries[0].kind = black_hole
//! adversaries[0].drop_fraction = 1.0
//! ```
//!
//! Unlisted keys take defaults; `#` starts a comment. Indexed sections
//! (`traffic[i].`, `adversaries[i].`, `node[i].`) must use contiguous
//! indices from zero.

use crate::adversary::AttackProfile;
use crate::geo::NodeId;
use std::collections::BTreeMap;
use std::fmt;

/// One constant-rate packet flow.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficFlow {
    pub source: NodeId,
    pub dest: NodeId,
    pub start: f64,
    pub count: u32,
    pub interval: f64,
    pub payload: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mobility {
    Static,
    RandomWaypoint {
        speed_min: f64,
        speed_max: f64,
        pause: f64,
    },
}

/// Group selection: a built-in name or explicit hex parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Named(String),
    Explicit { p_hex: String, w_hex: String },
}

/// Full simulator input. `Default` gives a two-node smoke scenario; real
/// runs come from [`Scenario::parse`] or struct literals in tests.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub seed: u64,
    pub area_width: f64,
    pub area_height: f64,
    pub node_count: u32,
    pub radio_range: f64,
    pub mobility: Mobility,
    pub beacon_interval: f64,
    pub neighbor_timeout: f64,
    pub duration: f64,
    pub traffic: Vec<TrafficFlow>,
    pub adversaries: Vec<(NodeId, AttackProfile)>,
    pub security_on: bool,
    pub dh_group: GroupSpec,
    pub hop_cap: u32,
    pub per_hop_latency: f64,
    pub mobility_tick: f64,
    /// Point spoofing adversaries advertise toward; area center when absent.
    pub spoof_bait: Option<(f64, f64)>,
    /// Explicit node placements; everyone else is drawn from the seed.
    pub placements: BTreeMap<NodeId, (f64, f64)>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            seed: 1,
            area_width: 500.0,
            area_height: 500.0,
            node_count: 2,
            radio_range: 150.0,
            mobility: Mobility::Static,
            beacon_interval: 1.0,
            neighbor_timeout: 4.5,
            duration: 5.0,
            traffic: Vec::new(),
            adversaries: Vec::new(),
            security_on: false,
            dh_group: GroupSpec::Named("test256".into()),
            hop_cap: 0, // 0 = auto: 4 * node_count
            per_hop_latency: 0.002,
            mobility_tick: 0.1,
            spoof_bait: None,
            placements: BTreeMap::new(),
        }
    }
}

/// Scenario problems, all of them at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioError {
    pub issues: Vec<String>,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid scenario:")?;
        for issue in &self.issues {
            writeln!(f, "  - {issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ScenarioError {}

impl Scenario {
    /// Effective hop budget: the configured cap, or 4x the node count.
    pub fn effective_hop_cap(&self) -> u32 {
        if self.hop_cap == 0 {
            4 * self.node_count
        } else {
            self.hop_cap
        }
    }

    /// Parses the flat key-value format. Collects every problem rather than
    /// stopping at the first.
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let mut map = KeyValues::read(text)?;
        Scenario::from_key_values(&mut map)
    }

    /// Parses the file, then applies `key=value` override strings (sweep
    /// points, command-line tweaks) on top.
    pub fn parse_with_overrides(text: &str, overrides: &[(String, String)]) -> Result<Scenario, ScenarioError> {
        let mut map = KeyValues::read(text)?;
        for (key, value) in overrides {
            map.set(key.clone(), value.clone());
        }
        Scenario::from_key_values(&mut map)
    }

    fn from_key_values(map: &mut KeyValues) -> Result<Scenario, ScenarioError> {
        let mut issues = Vec::new();
        let mut sc = Scenario::default();

        macro_rules! take {
            ($key:literal, $field:expr, $parse:ident) => {
                if let Some((line, raw)) = map.take($key) {
                    match $parse(&raw) {
                        Some(v) => $field = v,
                        None => issues.push(format!(
                            "line {line}: key `{}` has unparsable value `{raw}`",
                            $key
                        )),
                    }
                }
            };
        }

        take!("seed", sc.seed, parse_u64);
        take!("area_width", sc.area_width, parse_f64);
        take!("area_height", sc.area_height, parse_f64);
        take!("node_count", sc.node_count, parse_u32);
        take!("radio_range", sc.radio_range, parse_f64);
        take!("beacon_interval", sc.beacon_interval, parse_f64);
        take!("neighbor_timeout", sc.neighbor_timeout, parse_f64);
        take!("duration", sc.duration, parse_f64);
        take!("security_on", sc.security_on, parse_bool);
        take!("hop_cap", sc.hop_cap, parse_u32);
        take!("per_hop_latency", sc.per_hop_latency, parse_f64);
        take!("mobility_tick", sc.mobility_tick, parse_f64);

        // Mobility block.
        let mobility_kind = map.take("mobility");
        let speed_min = map.take("speed_min");
        let speed_max = map.take("speed_max");
        let pause = map.take("pause");
        match mobility_kind.as_ref().map(|(_, v)| v.as_str()) {
            None | Some("static") => {
                for extra in [&speed_min, &speed_max, &pause].into_iter().flatten() {
                    issues.push(format!(
                        "line {}: waypoint key without `mobility = random_waypoint`",
                        extra.0
                    ));
                }
                sc.mobility = Mobility::Static;
            }
            Some("random_waypoint") => {
                let parse_or = |kv: &Option<(usize, String)>, default: f64, issues: &mut Vec<String>| {
                    match kv {
                        None => default,
                        Some((line, raw)) => parse_f64(raw).unwrap_or_else(|| {
                            issues.push(format!("line {line}: unparsable speed/pause `{raw}`"));
                            default
                        }),
                    }
                };
                sc.mobility = Mobility::RandomWaypoint {
                    speed_min: parse_or(&speed_min, 1.0, &mut issues),
                    speed_max: parse_or(&speed_max, 10.0, &mut issues),
                    pause: parse_or(&pause, 2.0, &mut issues),
                };
            }
            Some(other) => {
                issues.push(format!(
                    "line {}: unknown mobility model `{other}`",
                    mobility_kind.as_ref().unwrap().0
                ));
            }
        }

        // DH group.
        let group = map.take("dh_group");
        let p_hex = map.take("dh_p_hex");
        let w_hex = map.take("dh_w_hex");
        match (group, p_hex, w_hex) {
            (Some((_, name)), None, None) => sc.dh_group = GroupSpec::Named(name),
            (None, Some((_, p)), Some((_, w))) => {
                sc.dh_group = GroupSpec::Explicit { p_hex: p, w_hex: w }
            }
            (None, None, None) => {}
            (_, p, w) => {
                let line = p.map(|x| x.0).or(w.map(|x| x.0)).unwrap_or(0);
                issues.push(format!(
                    "line {line}: dh_group and dh_p_hex/dh_w_hex are mutually exclusive, \
                     and explicit groups need both hex keys"
                ));
            }
        }

        if let Some((line, raw)) = map.take("spoof_bait") {
            match raw.split_once(',').and_then(|(x, y)| {
                Some((parse_f64(x.trim())?, parse_f64(y.trim())?))
            }) {
                Some(pair) => sc.spoof_bait = Some(pair),
                None => issues.push(format!("line {line}: spoof_bait wants `x,y` meters, got `{raw}`")),
            }
        }

        // Explicit placements: node[i].x / node[i].y.
        for (id, fields) in map.take_indexed("node") {
            let mut x = None;
            let mut y = None;
            for (field, (line, raw)) in fields {
                match field.as_str() {
                    "x" => x = parse_f64(&raw).or_else(|| {
                        issues.push(format!("line {line}: bad node[{id}].x `{raw}`"));
                        None
                    }),
                    "y" => y = parse_f64(&raw).or_else(|| {
                        issues.push(format!("line {line}: bad node[{id}].y `{raw}`"));
                        None
                    }),
                    other => issues.push(format!("line {line}: unknown key `node[{id}].{other}`")),
                }
            }
            match (x, y) {
                (Some(x), Some(y)) => {
                    sc.placements.insert(id as NodeId, (x, y));
                }
                _ => issues.push(format!("node[{id}] placement needs both .x and .y")),
            }
        }

        // Traffic flows.
        for (idx, fields) in map.take_indexed("traffic") {
            let mut flow = TrafficFlow {
                source: 0,
                dest: 0,
                start: 0.0,
                count: 1,
                interval: 1.0,
                payload: 32,
            };
            for (field, (line, raw)) in fields {
                let ok = match field.as_str() {
                    "source" => parse_u32(&raw).map(|v| flow.source = v).is_some(),
                    "dest" => parse_u32(&raw).map(|v| flow.dest = v).is_some(),
                    "start" => parse_f64(&raw).map(|v| flow.start = v).is_some(),
                    "count" => parse_u32(&raw).map(|v| flow.count = v).is_some(),
                    "interval" => parse_f64(&raw).map(|v| flow.interval = v).is_some(),
                    "payload" => parse_u64(&raw).map(|v| flow.payload = v as usize).is_some(),
                    other => {
                        issues.push(format!("line {line}: unknown key `traffic[{idx}].{other}`"));
                        true
                    }
                };
                if !ok {
                    issues.push(format!(
                        "line {line}: key `traffic[{idx}].{field}` has unparsable value `{raw}`"
                    ));
                }
            }
            sc.traffic.push(flow);
        }

        // Adversaries.
        for (idx, fields) in map.take_indexed("adversaries") {
            let mut node: Option<NodeId> = None;
            let mut kind: Option<String> = None;
            let mut params: BTreeMap<String, (usize, String)> = BTreeMap::new();
            for (field, (line, raw)) in fields {
                match field.as_str() {
                    "node" => match parse_u32(&raw) {
                        Some(v) => node = Some(v),
                        None => issues.push(format!(
                            "line {line}: key `adversaries[{idx}].node` has unparsable value `{raw}`"
                        )),
                    },
                    "kind" => kind = Some(raw),
                    other => {
                        params.insert(other.to_string(), (line, raw));
                    }
                }
            }
            let mut float_param = |name: &str, default: f64, issues: &mut Vec<String>| match params
                .remove(name)
            {
                None => default,
                Some((line, raw)) => parse_f64(&raw).unwrap_or_else(|| {
                    issues.push(format!(
                        "line {line}: key `adversaries[{idx}].{name}` has unparsable value `{raw}`"
                    ));
                    default
                }),
            };
            let profile = match kind.as_deref() {
                Some("black_hole") => Some(AttackProfile::BlackHole {
                    drop_fraction: float_param("drop_fraction", 1.0, &mut issues),
                }),
                Some("tamper") => Some(AttackProfile::Tamper {
                    bits: float_param("tamper_bits", 8.0, &mut issues) as u32,
                    target_auth: params
                        .remove("tamper_auth")
                        .map(|(_, v)| parse_bool(&v).unwrap_or(false))
                        .unwrap_or(false),
                }),
                Some("spoof_position") => Some(AttackProfile::SpoofPosition {
                    offset_m: float_param("spoof_offset", 100.0, &mut issues),
                }),
                Some("flood_beacons") => Some(AttackProfile::FloodBeacons {
                    multiplier: float_param("flood_multiplier", 10.0, &mut issues),
                }),
                Some(other) => {
                    issues.push(format!("adversaries[{idx}]: unknown kind `{other}`"));
                    None
                }
                None => {
                    issues.push(format!("adversaries[{idx}]: missing `kind`"));
                    None
                }
            };
            for (name, (line, _)) in params {
                issues.push(format!(
                    "line {line}: unknown key `adversaries[{idx}].{name}` for this kind"
                ));
            }
            if let (Some(node), Some(profile)) = (node, profile) {
                sc.adversaries.push((node, profile));
            } else if node.is_none() {
                issues.push(format!("adversaries[{idx}]: missing `node`"));
            }
        }

        // Anything left over is an unknown key.
        for (key, (line, _)) in map.drain() {
            issues.push(format!("line {line}: unknown key `{key}`"));
        }

        // Bound validation on the assembled scenario.
        issues.extend(sc.bound_violations());

        if issues.is_empty() {
            Ok(sc)
        } else {
            Err(ScenarioError { issues })
        }
    }

    /// Every violated bound, as human-readable strings.
    pub fn bound_violations(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if self.node_count < 2 {
            issues.push(format!("node_count {} below the minimum of 2", self.node_count));
        }
        if self.area_width <= 0.0 || self.area_height <= 0.0 {
            issues.push("area dimensions must be positive".into());
        }
        if self.radio_range <= 0.0 {
            issues.push("radio_range must be positive".into());
        }
        if self.duration <= 0.0 {
            issues.push("duration must be positive".into());
        }
        if self.beacon_interval <= 0.0 {
            issues.push("beacon_interval must be positive".into());
        }
        if self.neighbor_timeout <= 0.0 {
            issues.push("neighbor_timeout must be positive".into());
        }
        if self.per_hop_latency <= 0.0 {
            issues.push("per_hop_latency must be positive".into());
        }
        if self.mobility_tick <= 0.0 {
            issues.push("mobility_tick must be positive".into());
        }
        if let Mobility::RandomWaypoint { speed_min, speed_max, pause } = self.mobility {
            if speed_min < 0.0 || speed_max < speed_min {
                issues.push(format!(
                    "waypoint speeds must satisfy 0 <= speed_min <= speed_max, got [{speed_min}, {speed_max}]"
                ));
            }
            if pause < 0.0 {
                issues.push("waypoint pause must be non-negative".into());
            }
        }
        for (i, flow) in self.traffic.iter().enumerate() {
            if flow.source >= self.node_count {
                issues.push(format!("traffic[{i}].source {} out of range", flow.source));
            }
            if flow.dest >= self.node_count {
                issues.push(format!("traffic[{i}].dest {} out of range", flow.dest));
            }
            if flow.source == flow.dest {
                issues.push(format!("traffic[{i}] sends to itself"));
            }
            if flow.payload > crate::wire::MAX_DATA_LEN {
                issues.push(format!(
                    "traffic[{i}].payload {} exceeds the {}-byte data field",
                    flow.payload,
                    crate::wire::MAX_DATA_LEN
                ));
            }
            if flow.count == 0 {
                issues.push(format!("traffic[{i}].count must be at least 1"));
            }
            if flow.interval <= 0.0 && flow.count > 1 {
                issues.push(format!("traffic[{i}].interval must be positive"));
            }
            if flow.start < 0.0 {
                issues.push(format!("traffic[{i}].start must be non-negative"));
            }
        }
        for (i, (node, profile)) in self.adversaries.iter().enumerate() {
            if *node >= self.node_count {
                issues.push(format!("adversaries[{i}].node {node} out of range"));
            }
            if let Err(msg) = profile.validate() {
                issues.push(format!("adversaries[{i}]: {msg}"));
            }
        }
        for (&id, &(x, y)) in &self.placements {
            if id >= self.node_count {
                issues.push(format!("node[{id}] placement out of range"));
            }
            if x < 0.0 || x > self.area_width || y < 0.0 || y > self.area_height {
                issues.push(format!("node[{id}] placed outside the area"));
            }
        }
        issues
    }
}

fn parse_u64(s: &str) -> Option<u64> {
    s.trim().parse().ok()
}

fn parse_u32(s: &str) -> Option<u32> {
    s.trim().parse().ok()
}

fn parse_f64(s: &str) -> Option<f64> {
    let v: f64 = s.trim().parse().ok()?;
    v.is_finite().then_some(v)
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim() {
        "true" | "1" | "on" | "yes" => Some(true),
        "false" | "0" | "off" | "no" => Some(false),
        _ => None,
    }
}

/// Field name plus (line number, raw value) pairs under one `prefix[i]`.
type IndexedFields = Vec<(String, (usize, String))>;

/// Ordered key-value file contents, with line numbers for diagnostics.
struct KeyValues {
    entries: BTreeMap<String, (usize, String)>,
}

impl KeyValues {
    fn read(text: &str) -> Result<Self, ScenarioError> {
        let mut entries = BTreeMap::new();
        let mut issues = Vec::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match line.split_once('=') {
                Some((key, value)) => {
                    entries.insert(
                        key.trim().to_string(),
                        (line_no, value.trim().to_string()),
                    );
                }
                None => issues.push(format!("line {line_no}: expected `key = value`, got `{line}`")),
            }
        }
        if issues.is_empty() {
            Ok(KeyValues { entries })
        } else {
            Err(ScenarioError { issues })
        }
    }

    fn set(&mut self, key: String, value: String) {
        self.entries.insert(key, (0, value));
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    /// Extracts all `prefix[i].field` keys, grouped by index.
    fn take_indexed(&mut self, prefix: &str) -> Vec<(usize, IndexedFields)> {
        let mut grouped: BTreeMap<usize, IndexedFields> = BTreeMap::new();
        let keys: Vec<String> = self
            .entries
            .keys()
            .filter(|k| k.starts_with(&format!("{prefix}[")))
            .cloned()
            .collect();
        for key in keys {
            let value = self.entries.remove(&key).unwrap();
            let rest = &key[prefix.len() + 1..];
            if let Some((idx_str, field)) = rest.split_once("].") {
                if let Ok(idx) = idx_str.parse::<usize>() {
                    grouped.entry(idx).or_default().push((field.to_string(), value));
                    continue;
                }
            }
            // Unparsable indexed key: keep it so the unknown-key sweep
            // reports it.
            self.entries.insert(key, value);
        }
        grouped.into_iter().collect()
    }

    fn drain(&mut self) -> impl Iterator<Item = (String, (usize, String))> + '_ {
        std::mem::take(&mut self.entries).into_iter()
    }
}
