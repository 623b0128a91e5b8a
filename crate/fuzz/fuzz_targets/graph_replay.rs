#![no_main]

use kcb::algorithms::{color_all, Cbip, FirstFit};
use kcb::{ComponentTracker, OnlineGraph, PresentationStep, VertexId};
use libfuzzer_sys::fuzz_target;

// 0xff ends a step; other bytes are pre-neighbor ids, possibly invalid
fuzz_target!(|data: &[u8]| {
    let steps: Vec<PresentationStep> = data
        .split(|&b| b == 0xff)
        .enumerate()
        .map(|(v, pre)| {
            PresentationStep::new(
                VertexId(v),
                pre.iter().map(|&u| VertexId(u as usize)).collect(),
            )
        })
        .collect();
    let mut graph = OnlineGraph::new();
    let mut tracker = ComponentTracker::new();
    let mut accepted = Vec::new();
    for step in steps {
        let graph_ok = graph.push(step.clone()).is_ok();
        let tracker_ok = tracker.add_vertex(&step).is_ok();
        assert_eq!(graph_ok, tracker_ok);
        if !graph_ok {
            break;
        }
        accepted.push(step);
    }
    let bins = color_all(&mut FirstFit::new(), &accepted).expect("first fit accepts any graph");
    for (u, v) in graph.edges() {
        assert_ne!(bins[u.0], bins[v.0]);
    }
    let _ = color_all(&mut Cbip::new(), &accepted);
});
