#![no_main]
use lacent::graph::{parse_edge_list, EdgeListOptions, NodeIds, Separator};
use libfuzzer_sys::fuzz_target;

// First byte picks the options, the rest is the file.
fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let separator = match sel & 3 {
        0 => Separator::Tab,
        1 => Separator::Whitespace,
        2 => Separator::Char(','),
        _ => Separator::Char(';'),
    };
    let ids = match (sel >> 2) % 3 {
        0 => NodeIds::Labels,
        1 => NodeIds::ZeroBased,
        _ => NodeIds::OneBased,
    };
    // integer ids size the node table; keep allocations small
    if ids != NodeIds::Labels && text.split(|c: char| !c.is_ascii_digit()).any(|t| t.len() > 6) {
        return;
    }
    let opts = EdgeListOptions::default()
        .separator(separator)
        .ids(ids)
        .undirected(sel & 0x20 != 0);
    if let Ok(g) = parse_edge_list(text, &opts) {
        // canonical form must parse back to the same edges
        let back = parse_edge_list(&g.canonical_edge_list(), &EdgeListOptions::default())
            .expect("canonical edge list parses");
        if g.node_count() > 0 && g.edge_count() > 0 {
            assert_eq!(back.edge_count(), g.edge_count());
        }
    }
});
