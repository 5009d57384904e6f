//! End-to-end flows through the authority domain: enrolment, pseudonym
//! authorization, misbehavior reporting, revocation publication, identity
//! resolution, and banning.

use vpki_core::authorities::{
    AuthorizeError, BootstrapConfig, EnrollError, MisbehaviorReport, ResolveError, VpkiSystem,
};
use vpki_core::certkit::{generate_keypair, CanonicalId, HashedIdLength, KeyPair};
use vpki_core::tangle::{derive_address, LatencyModel, RevocationPayload};
use vpki_core::Certificate;

fn fresh_system(seed: u64) -> VpkiSystem {
    VpkiSystem::bootstrap(
        BootstrapConfig {
            seed,
            ..Default::default()
        },
        LatencyModel::Zero,
    )
}

fn canonical(tag: &str) -> CanonicalId {
    CanonicalId::new(tag.as_bytes().to_vec()).unwrap()
}

fn enroll_and_authorize(
    system: &mut VpkiSystem,
    id: &CanonicalId,
    now_s: u64,
) -> (Certificate, Certificate, KeyPair) {
    system.preregister(id.clone());
    let vehicle_kp = generate_keypair(None);
    let ltc = system.enroll(id, vehicle_kp.public(), now_s).unwrap();
    let stc_kp = generate_keypair(None);
    let stc = system.authorize(&ltc, stc_kp.public(), now_s).unwrap();
    (ltc, stc, stc_kp)
}

#[test]
fn enroll_issues_a_bound_ltc_with_a_record() {
    let mut system = fresh_system(1);
    let id = canonical("V-0001");
    system.preregister(id.clone());
    let kp = generate_keypair(Some(b"veh-1"));
    let ltc = system.enroll(&id, kp.public(), 100).unwrap();

    assert_eq!(ltc.subject_id, id.as_bytes());
    // Record-store oracle: exactly one record, mapping the LTC hash to the id.
    let records: Vec<_> = system.ltca().records().collect();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].issued_cert_hash, ltc.hashed_id(HashedIdLength::Id8));
    assert_eq!(records[0].subject.as_ref(), Some(&id));
    assert!(records[0].parent_ref.is_zero());
}

#[test]
fn enroll_requires_preregistration() {
    let mut system = fresh_system(2);
    let kp = generate_keypair(None);
    assert_eq!(
        system.enroll(&canonical("V-0404"), kp.public(), 0),
        Err(EnrollError::NotPreRegistered)
    );
}

#[test]
fn re_enrolment_yields_two_records_for_the_same_id() {
    let mut system = fresh_system(3);
    let id = canonical("V-0002");
    system.preregister(id.clone());
    let kp1 = generate_keypair(Some(b"kp1"));
    let kp2 = generate_keypair(Some(b"kp2"));
    let ltc1 = system.enroll(&id, kp1.public(), 10).unwrap();
    let ltc2 = system.enroll(&id, kp2.public(), 20).unwrap();
    assert_ne!(ltc1, ltc2);
    assert_eq!(system.ltca().record_count(), 2);
    assert!(system
        .ltca()
        .records()
        .all(|r| r.subject.as_ref() == Some(&id)));
}

#[test]
fn authorized_pseudonym_shares_no_canonical_bytes() {
    let mut system = fresh_system(4);
    let id = canonical("V-0003");
    let (_, stc, _) = enroll_and_authorize(&mut system, &id, 50);

    // Substring-scan oracle: no window of the canonical identifier, of any
    // length, appears in the pseudonym subject.
    let canon = id.as_bytes();
    for len in 1..=canon.len() {
        for window in canon.windows(len) {
            assert!(
                !stc.subject_id.windows(len).any(|w| w == window),
                "canonical substring {window:?} leaked into pseudonym"
            );
        }
    }
}

#[test]
fn authorize_rejects_expired_ltc() {
    let mut system = fresh_system(5);
    let id = canonical("V-0004");
    system.preregister(id.clone());
    let kp = generate_keypair(None);
    let ltc = system.enroll(&id, kp.public(), 100).unwrap();
    let after_expiry = ltc.not_after + 1;
    assert_eq!(
        system.authorize(&ltc, kp.public(), after_expiry),
        Err(AuthorizeError::ExpiredLtc)
    );
}

#[test]
fn authorize_rejects_foreign_or_tampered_chains() {
    let mut system = fresh_system(6);
    let mut foreign = fresh_system(999);
    let id = canonical("V-0005");
    foreign.preregister(id.clone());
    let kp = generate_keypair(None);
    let foreign_ltc = foreign.enroll(&id, kp.public(), 10).unwrap();
    assert_eq!(
        system.authorize(&foreign_ltc, kp.public(), 10),
        Err(AuthorizeError::BadChain)
    );

    system.preregister(id.clone());
    let mut tampered = system.enroll(&id, kp.public(), 10).unwrap();
    tampered.not_after += 1;
    assert_eq!(
        system.authorize(&tampered, kp.public(), 10),
        Err(AuthorizeError::BadChain)
    );
}

#[test]
fn first_report_publishes_exactly_one_ra_signed_transaction() {
    let mut system = fresh_system(7);
    let id = canonical("V-0006");
    let (_, stc, _) = enroll_and_authorize(&mut system, &id, 100);
    let stc_hash = stc.hashed_id(system.hash_len());

    let outcome = system
        .report_misbehavior(MisbehaviorReport {
            reported_stc_hash: stc_hash,
            evidence: b"speed claims inconsistent".to_vec(),
            reporter: "rsu-17".into(),
            report_time: 200,
        })
        .expect("first report must be processed");

    // Ledger-count oracle: one transaction at the derived address.
    let address = derive_address(&stc_hash);
    let txs = system.ledger().find_transactions(&address, u64::MAX);
    assert_eq!(txs.len(), 1);
    assert_eq!(txs[0], outcome.tx);

    // The payload verifies under the RA certificate.
    let payload = RevocationPayload::decode(&txs[0].payload).unwrap();
    assert!(payload.verify(&system.certs().ra.public_key));
    assert_eq!(payload.revoked_hash, stc_hash);
    assert_eq!(outcome.resolution.unwrap(), id);
}

#[test]
fn duplicate_reports_are_idempotent() {
    let mut system = fresh_system(8);
    let id = canonical("V-0007");
    let (_, stc, _) = enroll_and_authorize(&mut system, &id, 100);
    let stc_hash = stc.hashed_id(system.hash_len());
    let report = MisbehaviorReport {
        reported_stc_hash: stc_hash,
        evidence: Vec::new(),
        reporter: "obu-2".into(),
        report_time: 150,
    };

    assert!(system.report_misbehavior(report.clone()).is_some());
    let bans_after_first = system.ltca().ban_list().len();
    for _ in 0..5 {
        assert!(system.report_misbehavior(report.clone()).is_none());
    }
    assert_eq!(system.ltca().ban_list().len(), bans_after_first);
    assert_eq!(bans_after_first, 1);
    assert_eq!(
        system
            .ledger()
            .find_transactions(&derive_address(&stc_hash), u64::MAX)
            .len(),
        1
    );
}

#[test]
fn unknown_hash_still_publishes_but_resolution_fails() {
    let mut system = fresh_system(9);
    let unknown = vpki_core::hashed_id_of(b"never issued", HashedIdLength::Id8);
    let outcome = system
        .report_misbehavior(MisbehaviorReport {
            reported_stc_hash: unknown,
            evidence: Vec::new(),
            reporter: "rsu-1".into(),
            report_time: 60,
        })
        .unwrap();
    assert_eq!(outcome.resolution, Err(ResolveError::ResolutionFailed));
    assert_eq!(
        system
            .ledger()
            .find_transactions(&derive_address(&unknown), u64::MAX)
            .len(),
        1,
        "revocation must be published independently of resolution"
    );
    assert!(system.ltca().ban_list().is_empty());
}

#[test]
fn resolution_round_trip_recovers_the_canonical_id_and_bans_it() {
    let mut system = fresh_system(10);
    let id = canonical("V-0001");
    let (ltc, stc, _) = enroll_and_authorize(&mut system, &id, 100);
    let stc_hash = stc.hashed_id(system.hash_len());

    let resolved = system.resolve_identity(&stc_hash, 200).unwrap();
    assert_eq!(resolved, id);

    // Ban completeness: neither enrolment nor authorization succeeds again.
    let kp = generate_keypair(None);
    assert_eq!(
        system.enroll(&id, kp.public(), 300),
        Err(EnrollError::BannedSubject)
    );
    assert_eq!(
        system.authorize(&ltc, kp.public(), 300),
        Err(AuthorizeError::LtcaRejected)
    );
}

#[test]
fn resolving_a_random_hash_fails() {
    let mut system = fresh_system(11);
    let bogus = vpki_core::hashed_id_of(b"bogus", HashedIdLength::Id8);
    assert_eq!(
        system.resolve_identity(&bogus, 10),
        Err(ResolveError::ResolutionFailed)
    );
}

#[test]
fn stca_store_alone_cannot_reveal_canonical_identities() {
    let mut system = fresh_system(12);
    let ids: Vec<_> = (0..20).map(|i| canonical(&format!("V-{i:04}"))).collect();
    for id in &ids {
        enroll_and_authorize(&mut system, id, 10);
    }

    // Exhaustive scan of the STCA store: no record carries a subject, and no
    // canonical identifier's bytes appear in any record field.
    for record in system.stca().records() {
        assert!(record.subject.is_none());
        let mut field_bytes = Vec::new();
        field_bytes.extend_from_slice(record.issued_cert_hash.as_bytes());
        field_bytes.extend_from_slice(record.parent_ref.as_bytes());
        for id in &ids {
            let needle = id.as_bytes();
            assert!(
                !field_bytes.windows(needle.len()).any(|w| w == needle),
                "canonical id visible in STCA store"
            );
        }
    }
    // The two-step join still works for every vehicle.
    for (record, id) in system.stca().records().zip(&ids) {
        let ltc_hash = record.parent_ref;
        assert_eq!(system.ltca().lookup_subject(&ltc_hash), Some(id));
    }
}

#[test]
fn every_issued_certificate_chains_to_the_root() {
    let mut system = fresh_system(13);
    let certs = system.certs();
    for i in 0..5 {
        let id = canonical(&format!("V-{i}"));
        let (ltc, stc, _) = enroll_and_authorize(&mut system, &id, 10);
        assert_eq!(
            vpki_core::verify_chain(&ltc, &[certs.ltca.clone()], &certs.root, 10),
            Ok(())
        );
        assert_eq!(
            vpki_core::verify_chain(&stc, &[certs.stca.clone()], &certs.root, 10),
            Ok(())
        );
    }
}
