mod common;

use colorcomm_core::edge::edge_coloring_protocol;
use colorcomm_core::{verify_edge_coloring, RuntimeConfig};

use common::hub_heavy_instance;

#[test]
fn shared_partners_go_through_the_cover() {
    let mut targets = 0;
    let mut cover_rounds = 0;
    for seed in 0..40 {
        let p = hub_heavy_instance(6, 40, 8, seed);
        assert_eq!(p.max_degree(), 8);
        let run = edge_coloring_protocol(&p, &RuntimeConfig::default()).unwrap();
        let v = verify_edge_coloring(&p, &run.coloring, 15);
        assert!(v.is_empty(), "seed {seed}: {v:?}");
        for s in run.stats.unwrap() {
            assert!(s.cover_bitmap_bits <= 3 * s.cover_targets);
            targets += s.cover_targets;
        }
        cover_rounds += run.transcript.rounds_in_phase("cover");
        assert!(run.transcript.total_rounds <= 6);
        assert!(run.transcript.total_bits <= 30 * p.n() as u64);
    }
    assert!(targets > 0);
    assert!(cover_rounds > 0);
}

#[test]
fn larger_degrees_with_shared_partners() {
    for (delta, seed) in [(12, 1), (16, 2), (24, 3)] {
        let p = hub_heavy_instance(8, 4 * delta, delta, seed);
        let run = edge_coloring_protocol(&p, &RuntimeConfig::default()).unwrap();
        assert!(verify_edge_coloring(&p, &run.coloring, 2 * delta - 1).is_empty());
    }
}
