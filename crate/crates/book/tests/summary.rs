use std::collections::BTreeSet;
use std::path::Path;

fn book_src() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../book/src"))
}

fn linked_chapters() -> BTreeSet<String> {
    let summary = std::fs::read_to_string(book_src().join("SUMMARY.md")).unwrap();
    summary
        .split("](")
        .skip(1)
        .map(|rest| rest.split(')').next().unwrap().to_owned())
        .collect()
}

#[test]
fn every_summary_entry_is_doc_tested() {
    let compiled: BTreeSet<String> = weak_dirac_book::CHAPTERS
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert_eq!(linked_chapters(), compiled);
}

#[test]
fn no_orphan_chapters() {
    let on_disk: BTreeSet<String> = std::fs::read_dir(book_src())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".md") && n != "SUMMARY.md")
        .collect();
    assert_eq!(on_disk, linked_chapters());
}

#[test]
fn chapter_links_resolve() {
    for chapter in weak_dirac_book::CHAPTERS {
        let text = std::fs::read_to_string(book_src().join(chapter)).unwrap();
        for target in text
            .split("](")
            .skip(1)
            .map(|r| r.split(')').next().unwrap())
        {
            if target.ends_with(".md") {
                assert!(
                    book_src().join(target).exists(),
                    "{chapter} links to {target}"
                );
            }
        }
    }
}
