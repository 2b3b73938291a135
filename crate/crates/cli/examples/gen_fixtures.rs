//! Regenerates the bundled documents in `data/`.

use std::path::Path;

use gcover::bratteli::{kr_to_bratteli, BratteliPrefix, OrderedBratteliPrefix};
use gcover::towers;
use gcover_cli::document::{BratteliDocument, CoveringDocument, Document};

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    std::fs::create_dir_all(&dir)?;
    let coverings = [
        ("singleton.cov", towers::singleton(3)),
        ("dyadic.cov", towers::dyadic(8)),
        ("fibonacci.cov", towers::fibonacci(12)),
        ("rank3.cov", towers::rank3(4)),
        ("figure-fragment.cov", towers::figure_fragment()),
        ("gm-shared-tail.cov", towers::gm_shared_tail(4)),
        ("duplicated.cov", towers::duplicated(5)),
    ];
    for (name, sc) in &coverings {
        std::fs::write(dir.join(name), Document::Covering(CoveringDocument::from_structured(sc)).to_text())?;
    }
    let two_adic = OrderedBratteliPrefix { diagram: BratteliPrefix::uniform_single(6, 2), order: vec![vec![1, 2]; 6] };
    let fibonacci = kr_to_bratteli(&towers::fibonacci(5)).expect("KR tower");
    // Swapping the order into the first level-2 vertex moves its minimal
    // edge to a different source than the other level-2 vertex uses.
    let mut broken = kr_to_bratteli(&towers::fibonacci(3)).expect("KR tower");
    let into_first: Vec<usize> =
        (0..broken.diagram.edges[1].len()).filter(|&e| broken.diagram.edges[1][e].range == 0).collect();
    let (a, b) = (into_first[0], into_first[1]);
    broken.order[1].swap(a, b);
    let diagrams = [("two-adic.bd", two_adic), ("fibonacci.bd", fibonacci), ("not-properly-ordered.bd", broken)];
    for (name, b) in &diagrams {
        std::fs::write(dir.join(name), Document::Bratteli(BratteliDocument::from_ordered(b)).to_text())?;
    }
    Ok(())
}
