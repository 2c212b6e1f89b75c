//! Acceptance suite: one test per acceptance criterion, each printing a
//! PASS/FAIL line. Run with:
//!
//! ```bash
//! cargo test -p sgpsr --test acceptance -- --nocapture
//! ```

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgpsr::adversary::AttackProfile;
use sgpsr::auth::{sign_packet, verify_packet};
use sgpsr::crypto::{
    blowfish_encrypt, dh_generate, dh_shared, keypair_from_secret, md5_digest, mod_exp, Aes128,
    DhParams, SigningKey,
};
use sgpsr::geo::{NodeId, Position};
use sgpsr::oracle;
use sgpsr::sim::{
    self, placement_positions, Mobility, RunMetrics, Scenario, TrafficFlow,
};
use sgpsr::wire::{decode, encode, Command, GpsrPacket, HEADER_LEN, MAX_PACKET_LEN};
use std::panic::{catch_unwind, UnwindSafe};
use std::time::{Duration, Instant};

fn criterion(name: &str, budget: Option<Duration>, body: impl FnOnce() + UnwindSafe) {
    let started = Instant::now();
    let outcome = catch_unwind(body);
    let elapsed = started.elapsed();
    match outcome {
        Ok(()) => {
            if let Some(budget) = budget {
                if elapsed > budget {
                    println!("{name}: FAIL (runtime {elapsed:?} exceeds {budget:?})");
                    panic!("{name} exceeded its runtime budget: {elapsed:?} > {budget:?}");
                }
            }
            println!("{name}: PASS ({elapsed:.2?})");
        }
        Err(cause) => {
            println!("{name}: FAIL");
            std::panic::resume_unwind(cause);
        }
    }
}

fn random_packet(rng: &mut ChaCha8Rng) -> GpsrPacket {
    let command = [
        Command::BeaconRequest,
        Command::BeaconResponse,
        Command::GreedyData,
        Command::PerimeterData,
    ][rng.gen_range(0..4)];
    let mut pkt = GpsrPacket::new(command);
    pkt.source_pos = Position::new(rng.gen(), rng.gen());
    pkt.dest_pos = Position::new(rng.gen(), rng.gen());
    if command == Command::PerimeterData {
        pkt.perimeter_pos = Position::new(rng.gen(), rng.gen());
        pkt.edge = (
            Position::new(rng.gen(), rng.gen()),
            Position::new(rng.gen(), rng.gen()),
        );
    }
    pkt.port = rng.gen();
    let len = rng.gen_range(0..=250usize);
    pkt.data = (0..len).map(|_| rng.gen()).collect();
    pkt.auth = rng.gen();
    pkt
}

#[test]
fn criterion_01_wire_fidelity() {
    criterion(
        "criterion 1 (wire fidelity)",
        Some(Duration::from_secs(5)),
        || {
            assert_eq!(HEADER_LEN, 48, "fixed header width");
            assert_eq!(MAX_PACKET_LEN, 314, "maximum packet width");

            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0001);
            for _ in 0..10_000 {
                let pkt = random_packet(&mut rng);
                let bytes = encode(&pkt).expect("generated packets are valid");
                assert!(bytes.len() >= 64 && bytes.len() <= 314);
                assert_eq!(bytes.len(), pkt.packet_length());
                assert_eq!(decode(&bytes).expect("roundtrip"), pkt);
            }

            // Golden hex fixtures, one per command code.
            for (fixture, byte0) in [
                (include_str!("fixtures/beacon_request.hex"), 0x11u8),
                (include_str!("fixtures/beacon_response.hex"), 0x12),
                (include_str!("fixtures/greedy_data.hex"), 0x13),
                (include_str!("fixtures/perimeter_data.hex"), 0x14),
            ] {
                let bytes = hex::decode(fixture.trim()).expect("fixture hex");
                assert_eq!(bytes[0], byte0);
                let pkt = decode(&bytes).expect("fixtures decode");
                assert_eq!(
                    encode(&pkt).expect("fixtures re-encode"),
                    bytes,
                    "fixture must reproduce byte-for-byte"
                );
            }
        },
    );
}

#[test]
fn criterion_02_dh_agreement() {
    criterion(
        "criterion 2 (Diffie-Hellman agreement)",
        Some(Duration::from_secs(30)),
        || {
            // Worked example, pre-verified by the naive repeated-multiplication
            // oracle.
            let naive = |base: u64, exp: u64, modulus: u64| -> u64 {
                let mut acc = 1u128;
                for _ in 0..exp {
                    acc = acc * u128::from(base) % u128::from(modulus);
                }
                acc as u64
            };
            assert_eq!(naive(5, 6, 23), 8);
            assert_eq!(naive(5, 15, 23), 19);
            assert_eq!(naive(19, 6, 23), 2);
            assert_eq!(naive(8, 15, 23), 2);

            let demo = DhParams::named("demo23").unwrap();
            let a = keypair_from_secret(&demo, BigUint::from(6u8)).unwrap();
            let b = keypair_from_secret(&demo, BigUint::from(15u8)).unwrap();
            assert_eq!(a.public, BigUint::from(8u8));
            assert_eq!(b.public, BigUint::from(19u8));
            let s_ab = dh_shared(&demo, &a, &b.public).unwrap();
            let s_ba = dh_shared(&demo, &b, &a.public).unwrap();
            assert_eq!(s_ab.0, BigUint::from(2u8));
            assert_eq!(s_ba.0, BigUint::from(2u8));

            // 1000 random pairs across four small safe-prime groups.
            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0002);
            for (p, w) in [(23u64, 5u64), (47, 5), (59, 2), (83, 2)] {
                let params = DhParams::new(BigUint::from(p), BigUint::from(w)).unwrap();
                let mut agreed = 0;
                while agreed < 250 {
                    let x = dh_generate(&params, &mut rng);
                    let y = dh_generate(&params, &mut rng);
                    let (Ok(s_xy), Ok(s_yx)) = (
                        dh_shared(&params, &x, &y.public),
                        dh_shared(&params, &y, &x.public),
                    ) else {
                        // Degenerate publics in a tiny group: skipped draw.
                        continue;
                    };
                    assert_eq!(s_xy, s_yx, "p={p} w={w}");
                    agreed += 1;
                }
            }

            // The 2048-bit group.
            let big_group = DhParams::named("modp2048").unwrap();
            for _ in 0..3 {
                let x = dh_generate(&big_group, &mut rng);
                let y = dh_generate(&big_group, &mut rng);
                assert_eq!(
                    dh_shared(&big_group, &x, &y.public).unwrap(),
                    dh_shared(&big_group, &y, &x.public).unwrap()
                );
            }

            // The square-and-multiply path agrees with the naive oracle.
            for _ in 0..200 {
                let base = rng.gen_range(0u64..1 << 16);
                let exp = rng.gen_range(0u64..1 << 12);
                let modulus = rng.gen_range(2u64..1 << 16);
                assert_eq!(
                    mod_exp(
                        &BigUint::from(base),
                        &BigUint::from(exp),
                        &BigUint::from(modulus)
                    )
                    .unwrap(),
                    BigUint::from(naive(base, exp, modulus))
                );
            }
        },
    );
}

#[test]
fn criterion_03_primitive_vectors() {
    criterion(
        "criterion 3 (MD5/AES/Blowfish vectors)",
        Some(Duration::from_secs(1)),
        || {
            // MD5: the published suite plus the vendored boundary cases.
            assert_eq!(
                hex::encode(md5_digest(b"")),
                "d41d8cd98f00b204e9800998ecf8427e"
            );
            assert_eq!(
                hex::encode(md5_digest(b"abc")),
                "900150983cd24fb0d6963f7d28e17f72"
            );
            let mut md5_checked = 0;
            for line in include_str!("vectors/md5.txt").lines() {
                if line.trim().is_empty() {
                    continue;
                }
                let mut parts = line.split_whitespace();
                let input_field = parts.next().unwrap();
                let input = if input_field == "-" {
                    Vec::new()
                } else {
                    hex::decode(input_field).unwrap()
                };
                assert_eq!(hex::encode(md5_digest(&input)), parts.next().unwrap());
                md5_checked += 1;
            }
            assert_eq!(md5_checked, 20);

            // AES-128: the standard's worked example plus the vendored set.
            let mut aes_checked = 0;
            for line in include_str!("vectors/aes128.txt").lines() {
                if line.trim().is_empty() {
                    continue;
                }
                let mut parts = line.split_whitespace();
                let key: [u8; 16] = hex::decode(parts.next().unwrap())
                    .unwrap()
                    .try_into()
                    .unwrap();
                let pt: [u8; 16] = hex::decode(parts.next().unwrap())
                    .unwrap()
                    .try_into()
                    .unwrap();
                let want = parts.next().unwrap();
                let aes = Aes128::new(&key);
                let ct = aes.encrypt_block(&pt);
                assert_eq!(hex::encode(ct), want);
                assert_eq!(aes.decrypt_block(&ct), pt);
                aes_checked += 1;
            }
            assert_eq!(aes_checked, 10);

            // Blowfish: the cipher author's vector set plus longer keys.
            let zero = blowfish_encrypt(&[0u8; 8], &[0u8; 8]).unwrap();
            assert_eq!(hex::encode(zero), "4ef997456198dd78");
            let mut bf_checked = 0;
            for line in include_str!("vectors/blowfish.txt").lines() {
                if line.trim().is_empty() {
                    continue;
                }
                let mut parts = line.split_whitespace();
                let key = hex::decode(parts.next().unwrap()).unwrap();
                let pt = hex::decode(parts.next().unwrap()).unwrap();
                let want = parts.next().unwrap();
                assert_eq!(hex::encode(blowfish_encrypt(&key, &pt).unwrap()), want);
                bf_checked += 1;
            }
            assert_eq!(bf_checked, 10);
        },
    );
}

#[test]
fn criterion_04_signature_laws() {
    criterion(
        "criterion 4 (signature laws)",
        Some(Duration::from_secs(10)),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0004);

            // Completeness over 1000 random key/packet pairs.
            for _ in 0..1_000 {
                let key = SigningKey(rng.gen());
                let pkt = random_packet(&mut rng);
                let signed = sign_packet(&key, &pkt).unwrap();
                assert!(verify_packet(&key, &signed));
            }

            // Exhaustive single-bit tamper over one golden packet's full
            // signed region (48-byte header + 250-byte payload = 2384 bits).
            let key = SigningKey(*b"\x00\x01\x02\x03\x04\x05\x06\x07\x08\x09\x0a\x0b\x0c\x0d\x0e\x0f");
            let mut golden = GpsrPacket::new(Command::GreedyData);
            golden.source_pos = Position::from_meters(12.34, -56.78);
            golden.dest_pos = Position::from_meters(901.0, 23.45);
            golden.port = 4242;
            golden.data = (0..250u32).map(|i| (i * 3 + 1) as u8).collect();
            let signed = sign_packet(&key, &golden).unwrap();
            let bytes = encode(&signed).unwrap();
            let region_len = bytes.len() - 16;
            assert_eq!(region_len, 298);
            for byte in 0..region_len {
                for bit in 0..8 {
                    let mut mutated = bytes.clone();
                    mutated[byte] ^= 1 << bit;
                    // Some header mutations no longer decode at all; those
                    // count as detected. Every mutation that still decodes
                    // must fail verification.
                    if let Ok(pkt) = decode(&mutated) {
                        assert!(
                            !verify_packet(&key, &pkt),
                            "bit flip at byte {byte} bit {bit} went undetected"
                        );
                    }
                }
            }

            // Wrong-key verification fails, 1000 samples.
            for _ in 0..1_000 {
                let k1 = SigningKey(rng.gen());
                let k2 = SigningKey(rng.gen());
                if k1 == k2 {
                    continue;
                }
                let pkt = random_packet(&mut rng);
                let signed = sign_packet(&k1, &pkt).unwrap();
                assert!(!verify_packet(&k2, &signed));
            }
        },
    );
}

#[test]
fn criterion_05_key_count_law() {
    criterion("criterion 5 (n(n-1)/2 pairwise keys)", None, || {
        // End to end: a 10-node clique scenario.
        let mut sc = Scenario {
            seed: 7,
            node_count: 10,
            area_width: 200.0,
            area_height: 200.0,
            radio_range: 300.0, // everyone hears everyone
            duration: 4.0,
            security_on: true,
            ..Scenario::default()
        };
        sc.traffic.push(TrafficFlow {
            source: 0,
            dest: 9,
            start: 2.5,
            count: 5,
            interval: 0.2,
            payload: 32,
        });
        let m = sim::run(&sc).expect("valid scenario");
        assert_eq!(m.keys_established, 45, "10 * 9 / 2 pairwise keys");
        assert_eq!(m.delivered, m.generated);

        // Key symmetry key(u,v) = key(v,u) is asserted inside the run for
        // every counted pair; distinctness is checked at the module level:
        // replay discovery by hand and collect the key values.
        let params = DhParams::named("test256").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0005);
        let n = 10u32;
        let keypairs: Vec<_> = (0..n).map(|_| dh_generate(&params, &mut rng)).collect();
        let positions: Vec<Position> = (0..n)
            .map(|i| Position::from_meters(f64::from(i) * 10.0, 0.0))
            .collect();
        let mut tables: Vec<_> = (0..n)
            .map(|_| sgpsr::neighbors::NeighborTable::new(1.0, 4.5))
            .collect();
        for sender in 0..n as usize {
            let request =
                sgpsr::neighbors::make_beacon_request(positions[sender], Some(&keypairs[sender]))
                    .unwrap();
            for receiver in 0..n as usize {
                if receiver == sender {
                    continue;
                }
                let response = sgpsr::neighbors::handle_beacon(
                    &mut tables[receiver],
                    Some((&params, &keypairs[receiver])),
                    &request,
                    sender as NodeId,
                    positions[receiver],
                    0.0,
                );
                if let Some(resp) = response {
                    for third in 0..n as usize {
                        if third != receiver {
                            sgpsr::neighbors::handle_beacon(
                                &mut tables[third],
                                Some((&params, &keypairs[third])),
                                &resp,
                                receiver as NodeId,
                                positions[third],
                                0.0,
                            );
                        }
                    }
                }
            }
        }
        let mut distinct = std::collections::BTreeSet::new();
        for u in 0..n {
            for v in u + 1..n {
                let k_uv = tables[u as usize].key_for(v).expect("established");
                let k_vu = tables[v as usize].key_for(u).expect("established");
                assert_eq!(k_uv, k_vu, "pair ({u},{v})");
                distinct.insert(k_uv.0);
            }
        }
        assert_eq!(distinct.len(), 45, "all 45 keys are distinct");
    });
}

/// A static 50-node scenario on the given seed. Returns the scenario plus
/// its node placement for oracle checks.
fn static_50_node_instance(seed: u64, range: f64) -> (Scenario, Vec<(NodeId, Position)>) {
    let sc = Scenario {
        seed,
        node_count: 50,
        area_width: 1000.0,
        area_height: 1000.0,
        radio_range: range,
        mobility: Mobility::Static,
        security_on: false,
        duration: 8.0,
        ..Scenario::default()
    };
    let nodes: Vec<(NodeId, Position)> = placement_positions(&sc)
        .iter()
        .enumerate()
        .map(|(i, &p)| (i as NodeId, p))
        .collect();
    (sc, nodes)
}

/// The first seed at or after `from` whose placement is fully connected.
fn fully_connected_seed(from: u64, range: f64) -> u64 {
    let mut seed = from;
    loop {
        let (_, nodes) = static_50_node_instance(seed, range);
        if oracle::fully_connected(&nodes, range) {
            return seed;
        }
        seed += 1;
        assert!(seed < from + 5_000, "no connected placement found");
    }
}

#[test]
fn criterion_06_delivery_guarantee() {
    criterion(
        "criterion 6 (delivery guarantee, security off)",
        Some(Duration::from_secs(120)),
        || {
            // 100 random static instances. The BFS oracle decides, flow by
            // flow, whether the endpoints are connected; every connected
            // flow must deliver every packet, and no packet may cross a
            // graph cut. Greedy strict progress is asserted on each forward
            // inside the simulator.
            let flows = [(0u32, 49u32), (7, 42), (13, 31), (3, 46)];
            let mut connected_flows = 0u32;
            let mut perimeter_hops = 0u64;
            for seed in 1..=100u64 {
                let (mut sc, nodes) = static_50_node_instance(seed, 170.0);
                let reachable: Vec<bool> = flows
                    .iter()
                    .map(|&(s, d)| oracle::bfs_connected(&nodes, sc.radio_range, s, d))
                    .collect();
                for (i, (source, dest)) in flows.iter().enumerate() {
                    sc.traffic.push(TrafficFlow {
                        source: *source,
                        dest: *dest,
                        start: 2.0 + i as f64 * 0.1,
                        count: 2,
                        interval: 0.3,
                        payload: 32,
                    });
                }
                let (m, trace) = sim::run_with_trace(&sc).expect("valid scenario");

                // Per-flow accounting straight from the event trace.
                let mut injected = vec![0u32; flows.len()];
                let mut flow_of_uid = std::collections::BTreeMap::new();
                let mut delivered = vec![0u32; flows.len()];
                for line in trace.lines() {
                    if let Some(rest) = line.split_once(" inject uid=").map(|x| x.1) {
                        let uid: u64 = rest.split_whitespace().next().unwrap().parse().unwrap();
                        let flow: usize = rest
                            .split_once("flow=")
                            .unwrap()
                            .1
                            .split_whitespace()
                            .next()
                            .unwrap()
                            .parse()
                            .unwrap();
                        injected[flow] += 1;
                        flow_of_uid.insert(uid, flow);
                    } else if let Some(rest) = line.split_once(" deliver uid=").map(|x| x.1) {
                        let uid: u64 = rest.split_whitespace().next().unwrap().parse().unwrap();
                        delivered[flow_of_uid[&uid]] += 1;
                    }
                }
                assert_eq!(m.generated as u32, injected.iter().sum::<u32>());

                for (i, &ok) in reachable.iter().enumerate() {
                    assert_eq!(injected[i], 2, "seed {seed}: flow {i} injected");
                    if ok {
                        connected_flows += 1;
                        assert_eq!(
                            delivered[i], injected[i],
                            "seed {seed}: flow {i} is BFS-connected and must fully deliver"
                        );
                    } else {
                        assert_eq!(
                            delivered[i], 0,
                            "seed {seed}: flow {i} crosses a cut; nothing can arrive"
                        );
                    }
                }
                perimeter_hops += trace
                    .lines()
                    .filter(|l| l.contains("cmd=perimeter-data"))
                    .count() as u64;
            }
            assert!(
                connected_flows >= 200,
                "the instance family must exercise plenty of connected flows, saw {connected_flows}"
            );
            assert!(
                perimeter_hops > 0,
                "the family must exercise perimeter recovery"
            );
        },
    );
}

/// Metric fields that must not change when security is toggled with no
/// adversary present: everything except keys_established (zero when off)
/// and channel_busy_fraction (beacons carry DH payloads when on).
fn transparency_view(m: &RunMetrics) -> Vec<String> {
    vec![
        m.generated.to_string(),
        m.delivered.to_string(),
        format!("{:.9}", m.delivery_ratio()),
        m.drop_auth_failure.to_string(),
        m.drop_no_route.to_string(),
        m.drop_no_neighbors.to_string(),
        m.drop_ttl.to_string(),
        m.drop_blackhole.to_string(),
        m.drop_link_lost.to_string(),
        m.in_flight_at_end.to_string(),
        format!("{:.9}", m.mean_hops),
        m.corrupted_delivered.to_string(),
        m.beacons_sent.to_string(),
        m.adversary_relayed.to_string(),
    ]
}

#[test]
fn criterion_07_security_transparency() {
    criterion("criterion 7 (security transparency)", None, || {
        // The no-adversary scenarios of the test matrix.
        let mut matrix: Vec<Scenario> = Vec::new();

        let mut two = Scenario {
            seed: 42,
            node_count: 2,
            radio_range: 150.0,
            duration: 6.0,
            ..Scenario::default()
        };
        two.placements.insert(0, (100.0, 150.0));
        two.placements.insert(1, (200.0, 150.0));
        two.traffic.push(TrafficFlow {
            source: 0,
            dest: 1,
            start: 2.0,
            count: 10,
            interval: 0.2,
            payload: 64,
        });
        matrix.push(two);

        let mut clique = Scenario {
            seed: 7,
            node_count: 10,
            area_width: 200.0,
            area_height: 200.0,
            radio_range: 300.0,
            duration: 4.0,
            ..Scenario::default()
        };
        clique.traffic.push(TrafficFlow {
            source: 0,
            dest: 9,
            start: 2.5,
            count: 5,
            interval: 0.2,
            payload: 32,
        });
        matrix.push(clique);

        let seed = fully_connected_seed(1, 180.0);
        let (mut multihop, _) = static_50_node_instance(seed, 180.0);
        multihop.traffic.push(TrafficFlow {
            source: 0,
            dest: 49,
            start: 2.0,
            count: 5,
            interval: 0.3,
            payload: 64,
        });
        matrix.push(multihop);

        let mut mobile = Scenario {
            seed: 21,
            node_count: 20,
            area_width: 600.0,
            area_height: 600.0,
            radio_range: 220.0,
            duration: 10.0,
            mobility: Mobility::RandomWaypoint {
                speed_min: 2.0,
                speed_max: 12.0,
                pause: 1.0,
            },
            ..Scenario::default()
        };
        mobile.traffic.push(TrafficFlow {
            source: 0,
            dest: 19,
            start: 3.0,
            count: 15,
            interval: 0.4,
            payload: 64,
        });
        matrix.push(mobile);

        for (i, base) in matrix.into_iter().enumerate() {
            let mut on = base.clone();
            on.security_on = true;
            let mut off = base;
            off.security_on = false;
            let m_on = sim::run(&on).expect("valid scenario");
            let m_off = sim::run(&off).expect("valid scenario");
            assert_eq!(
                transparency_view(&m_on),
                transparency_view(&m_off),
                "scenario {i}: security toggle changed routing outcomes"
            );
            assert!(m_on.keys_established > 0);
            assert_eq!(m_off.keys_established, 0);
        }
    });
}

fn tamper_line_scenario(security_on: bool) -> Scenario {
    let mut sc = Scenario {
        seed: 5,
        node_count: 3,
        area_width: 400.0,
        area_height: 100.0,
        radio_range: 120.0,
        duration: 6.0,
        security_on,
        ..Scenario::default()
    };
    sc.placements.insert(0, (50.0, 50.0));
    sc.placements.insert(1, (150.0, 50.0));
    sc.placements.insert(2, (250.0, 50.0));
    sc.traffic.push(TrafficFlow {
        source: 0,
        dest: 2,
        start: 2.0,
        count: 10,
        interval: 0.2,
        payload: 64,
    });
    sc.adversaries.push((
        1,
        AttackProfile::Tamper {
            bits: 8,
            target_auth: false,
        },
    ));
    sc
}

#[test]
fn criterion_08_tamper_defense() {
    criterion("criterion 8 (tamper defense)", None, || {
        let m_off = sim::run(&tamper_line_scenario(false)).expect("valid scenario");
        assert!(
            m_off.corrupted_delivered > 0,
            "without signatures, corrupted payloads reach the destination"
        );

        let m_on = sim::run(&tamper_line_scenario(true)).expect("valid scenario");
        assert_eq!(m_on.corrupted_delivered, 0, "signatures stop corruption");
        assert!(m_on.drop_auth_failure > 0, "tampering shows up as auth drops");
    });
}

#[test]
fn criterion_09_attack_characterization() {
    criterion("criterion 9 (black hole and spoofing)", None, || {
        // Black hole on a cut vertex: the oracle proves node 3 is the only
        // bridge; a full black hole there zeroes the flow with security on
        // or off.
        let placements = [
            (0u32, 100.0, 100.0),
            (1, 60.0, 40.0),
            (2, 140.0, 160.0),
            (3, 250.0, 100.0),
            (4, 400.0, 100.0),
            (5, 440.0, 40.0),
        ];
        let nodes: Vec<(NodeId, Position)> = placements
            .iter()
            .map(|&(id, x, y)| (id, Position::from_meters(x, y)))
            .collect();
        assert!(
            oracle::cut_vertices(&nodes, 160.0).contains(&3),
            "node 3 must be a cut vertex"
        );
        assert!(oracle::bfs_connected(&nodes, 160.0, 0, 5));

        for security in [true, false] {
            let mut sc = Scenario {
                seed: 9,
                node_count: 6,
                area_width: 500.0,
                area_height: 200.0,
                radio_range: 160.0,
                duration: 6.0,
                security_on: security,
                ..Scenario::default()
            };
            for &(id, x, y) in &placements {
                sc.placements.insert(id, (x, y));
            }
            sc.traffic.push(TrafficFlow {
                source: 0,
                dest: 5,
                start: 2.0,
                count: 10,
                interval: 0.2,
                payload: 48,
            });
            sc.adversaries
                .push((3, AttackProfile::BlackHole { drop_fraction: 1.0 }));
            let m = sim::run(&sc).expect("valid scenario");
            assert_eq!(
                m.delivered, 0,
                "security={security}: the cut-vertex black hole kills the flow"
            );
            assert_eq!(m.drop_blackhole + m.in_flight_at_end, m.generated);
        }

        // Position spoofing: same seed, honest baseline (offset 0) vs
        // spoofing (offset 150); the adversary's relayed-traffic share must
        // rise.
        let corridor = |offset_m: f64| {
            let mut sc = Scenario {
                seed: 12,
                node_count: 5,
                area_width: 600.0,
                area_height: 500.0,
                radio_range: 280.0,
                duration: 6.0,
                security_on: true,
                ..Scenario::default()
            };
            for (id, x, y) in [
                (0u32, 50.0, 300.0),
                (1, 200.0, 380.0),
                (2, 350.0, 380.0),
                (3, 500.0, 300.0),
                (4, 200.0, 100.0),
            ] {
                sc.placements.insert(id, (x, y));
            }
            sc.spoof_bait = Some((500.0, 300.0));
            sc.traffic.push(TrafficFlow {
                source: 0,
                dest: 3,
                start: 2.0,
                count: 10,
                interval: 0.2,
                payload: 48,
            });
            sc.adversaries
                .push((4, AttackProfile::SpoofPosition { offset_m }));
            sc
        };
        let honest = sim::run(&corridor(0.0)).expect("valid scenario");
        let spoofed = sim::run(&corridor(150.0)).expect("valid scenario");
        assert_eq!(honest.adversary_relayed, 0);
        assert!(
            spoofed.adversary_relayed > honest.adversary_relayed,
            "spoofing must divert traffic through the adversary \
             ({} vs {})",
            spoofed.adversary_relayed,
            honest.adversary_relayed
        );
    });
}

#[test]
fn criterion_10_benchmark_shape() {
    criterion("criterion 10 (benchmark shape and stability)", None, || {
        let sizes = [128usize, 256, 512];

        // Two full measured runs at >= 10^4 iterations per cell. The runs
        // interleave sample by sample: on this shared single-vCPU machine,
        // sequential runs would compare two different co-tenant loads
        // rather than the harness, and external speed swings exceeding the
        // criterion's own tolerance were observed between back-to-back
        // sequential runs.
        let (run1, run2) = sgpsr::bench::run_bench_paired(&sizes, 10_000).expect("legal sizes");
        let run1_rows: Vec<_> = sgpsr::bench::grid_rows(&run1).into_iter().cloned().collect();
        let run2_rows: Vec<_> = sgpsr::bench::grid_rows(&run2).into_iter().cloned().collect();

        // Full 2-algorithm x 2-operation x 3-size grid.
        assert_eq!(run1_rows.len(), 12);
        for algorithm in ["aes128", "blowfish"] {
            for operation in ["encrypt", "decrypt"] {
                for size in sizes {
                    assert!(
                        run1_rows.iter().any(|r| r.algorithm.as_str() == algorithm
                            && r.operation.as_str() == operation
                            && r.message_size == size
                            && r.iterations >= 10_000),
                        "missing grid cell {algorithm}/{operation}/{size}"
                    );
                }
            }
        }

        // Run-to-run median stability within +-20%.
        for r1 in &run1_rows {
            let r2 = run2_rows
                .iter()
                .find(|r| {
                    r.algorithm == r1.algorithm
                        && r.operation == r1.operation
                        && r.message_size == r1.message_size
                })
                .expect("same grid");
            let hi = r1.median_ns.max(r2.median_ns) as f64;
            let lo = (r1.median_ns.min(r2.median_ns) as f64).max(1.0);
            assert!(
                hi / lo <= 1.2,
                "{}/{}/{}: medians {} vs {} differ by more than 20%",
                r1.algorithm.as_str(),
                r1.operation.as_str(),
                r1.message_size,
                r1.median_ns,
                r2.median_ns
            );
        }

        // The published figures are carried as reference output only; the
        // emitted table shows them beside measured numbers.
        let quick = sgpsr::bench::run_bench(&sizes, 200).expect("legal sizes");
        let table = sgpsr::bench::emit_table(&quick);
        assert!(table.contains("6383481"));
        assert!(table.contains("reference_ns"));
    });
}

#[test]
fn criterion_11_determinism() {
    criterion("criterion 11 (bitwise determinism)", None, || {
        // A multihop benign scenario and an adversarial one.
        let seed = fully_connected_seed(1, 180.0);
        let (mut benign, _) = static_50_node_instance(seed, 180.0);
        benign.security_on = true;
        benign.traffic.push(TrafficFlow {
            source: 0,
            dest: 49,
            start: 2.0,
            count: 5,
            interval: 0.3,
            payload: 64,
        });
        let adversarial = tamper_line_scenario(true);

        for (name, sc) in [("benign", benign), ("adversarial", adversarial)] {
            let (m1, t1) = sim::run_with_trace(&sc).expect("valid scenario");
            let (m2, t2) = sim::run_with_trace(&sc).expect("valid scenario");
            assert_eq!(
                m1.to_csv_row(),
                m2.to_csv_row(),
                "{name}: metrics CSV must be byte-identical"
            );
            assert_eq!(t1, t2, "{name}: event traces must be byte-identical");
            assert!(!t1.is_empty());
        }
    });
}
