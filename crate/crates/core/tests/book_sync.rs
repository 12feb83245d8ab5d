use std::path::Path;

#[test]
fn every_chapter_is_doctested() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../book/src");
    let summary = std::fs::read_to_string(root.join("SUMMARY.md")).unwrap();
    let lib = include_str!("../src/lib.rs");
    let chapters: Vec<&str> = summary
        .lines()
        .filter_map(|l| l.split_once("](").map(|(_, rest)| rest.trim_end_matches(')')))
        .collect();
    assert_eq!(chapters.len(), 7);
    for ch in chapters {
        assert!(root.join(ch).exists(), "{ch} listed but missing");
        assert!(lib.contains(&format!("book/src/{ch}\")")), "{ch} is not doctested");
    }
}
