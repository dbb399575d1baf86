use std::collections::BTreeSet;

use hyperkit::dsl::{self, Document};
use hyperkit::dsl as build;
use hyperkit::enumeration::{
    canonical_hypergroup, enumerate_canonical_hypergroups, enumerate_hyperfields, enumerate_ordered_hypergroups,
    identity_row_oracle, permutations_fixing_zero, Budget,
};
use hyperkit::hypergroup::verify_canonical;
use hyperkit::morphism::find_isomorphism;

fn key(t: &hyperkit::hypergroup::HyperOpTable) -> Vec<u32> {
    t.entries().iter().map(|m| m.bits()).collect()
}

#[test]
fn labelled_search_matches_identity_row_oracle() {
    for n in 1..=4 {
        let oracle: BTreeSet<_> = identity_row_oracle(n).unwrap().iter().map(key).collect();
        let found: BTreeSet<_> =
            enumerate_canonical_hypergroups(n, false, Budget::UNLIMITED).unwrap().entries.iter().map(|h| key(h.table())).collect();
        assert_eq!(found, oracle, "n = {n}");
    }
    assert_eq!(identity_row_oracle(4).unwrap().len(), 390);
}

#[test]
fn dedup_is_one_per_class() {
    for n in 1..=4 {
        let labelled = enumerate_canonical_hypergroups(n, false, Budget::UNLIMITED).unwrap();
        let reps = enumerate_canonical_hypergroups(n, true, Budget::UNLIMITED).unwrap();
        for (i, a) in reps.entries.iter().enumerate() {
            for b in &reps.entries[i + 1..] {
                assert!(find_isomorphism(a, b, None).is_none(), "n = {n}: duplicate class");
            }
        }
        for h in &labelled.entries {
            assert_eq!(reps.entries.iter().filter(|r| find_isomorphism(h, r, None).is_some()).count(), 1);
        }
    }
    assert_eq!(enumerate_canonical_hypergroups(4, true, Budget::UNLIMITED).unwrap().len(), 97);
}

#[test]
fn canonical_form_ignores_relabeling() {
    let reps = enumerate_canonical_hypergroups(4, true, Budget::UNLIMITED).unwrap();
    let perms = permutations_fixing_zero(4);
    for h in &reps.entries {
        let c = canonical_hypergroup(h);
        for p in &perms {
            let g = h.relabeled(p);
            assert!(verify_canonical(g.table().clone(), g.identity(), g.labels().to_vec()).is_ok());
            assert_eq!(key(canonical_hypergroup(&g).table()), key(c.table()));
        }
    }
}

#[test]
fn every_order_three_structure_round_trips() {
    let mut doc = Document { blocks: Vec::new() };
    let hs = enumerate_canonical_hypergroups(3, true, Budget::UNLIMITED).unwrap();
    for (i, h) in hs.entries.iter().enumerate() {
        doc.blocks.push(build::hypergroup_block(&format!("H{i}"), h, None, None));
    }
    let os = enumerate_ordered_hypergroups(3, Budget::UNLIMITED).unwrap();
    for (i, o) in os.entries.iter().enumerate() {
        doc.blocks.push(build::hypergroup_block(&format!("O{i}"), o.hypergroup(), Some(o.order()), None));
    }
    let fs = enumerate_hyperfields(3, Budget::UNLIMITED).unwrap();
    for (i, f) in fs.entries.iter().enumerate() {
        doc.blocks.push(build::hyperfield_block(&format!("F{i}"), f));
    }
    let text = dsl::serialize(&doc);
    let back = dsl::parse(&text).unwrap();
    assert_eq!(dsl::serialize(&back), text);
    for (i, h) in hs.entries.iter().enumerate() {
        let p = build::build_hypergroup(&back, &format!("H{i}")).unwrap();
        assert_eq!((&p.table, p.identity, p.order.is_none()), (h.table(), h.identity(), true));
    }
    for (i, o) in os.entries.iter().enumerate() {
        let p = build::build_hypergroup(&back, &format!("O{i}")).unwrap();
        assert_eq!((&p.table, p.order.as_ref()), (o.hypergroup().table(), Some(o.order())));
    }
    for (i, f) in fs.entries.iter().enumerate() {
        assert_eq!(build::build_ring(&back, &format!("F{i}")).unwrap(), f.ring().data());
    }
}

#[test]
fn one_element_text() {
    let doc = dsl::parse("hypergroup T { elements: 0; identity: 0; 0*0 = {0} }").unwrap();
    let p = build::build_hypergroup(&doc, "T").unwrap();
    assert!(verify_canonical(p.table, p.identity, p.labels).is_ok());
}
