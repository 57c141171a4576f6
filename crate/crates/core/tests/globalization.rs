// SPDX-License-Identifier: Apache-2.0

mod common;

use urysohn::cli::document::CertificateDocument;
use urysohn::globalization::{extend_partial_to_global, globalize, locally_finite_tower, verify_certificate, verify_tower, GlobalizeConfig};
use urysohn::isometry::{isometry_group, partial_isometries};
use urysohn::{Error, FiniteMetricSpace};

#[test]
fn partial_isometries_extend_or_report_their_state() {
    let (mut extended, mut cut) = (0, 0);
    for space in common::suite(17, 60, 4) {
        for p in partial_isometries(&space) {
            match extend_partial_to_global(&space, &p, 8) {
                Ok(e) => {
                    extended += 1;
                    assert!(isometry_group(&e.space).contains(&e.isometry));
                    assert!(p.pairs().all(|(x, y)| e.isometry.apply(x) == y));
                    assert_eq!(e.space.prefix(space.len()).unwrap(), space);
                }
                Err(Error::BudgetExceeded(b)) => {
                    cut += 1;
                    assert!(b.space.len() <= space.len() + 8);
                    assert_eq!(b.space.prefix(space.len()).unwrap(), space);
                }
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert!(100 * cut <= extended + cut, "{extended} extended, {cut} over budget");
}

#[test]
fn certificates_survive_serialization() {
    let path = FiniteMetricSpace::from_int_rows(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]).unwrap();
    let cert = globalize(&path, &GlobalizeConfig::default()).unwrap().certificate;
    let doc = CertificateDocument::from_certificate(&cert);
    let back = CertificateDocument::parse(&doc.to_json()).unwrap().to_certificate().unwrap().unwrap();
    assert_eq!(back, cert);
    assert!(verify_certificate(&back).valid);
}

#[test]
fn towers_over_a_schedule() {
    let schedule = FiniteMetricSpace::from_int_rows(&[&[0, 1, 2, 1], &[1, 0, 1, 2], &[2, 1, 0, 1], &[1, 2, 1, 0]]).unwrap();
    let tower = locally_finite_tower(&schedule, 3, &GlobalizeConfig::default(), 50_000).unwrap();
    assert!(tower.complete);
    assert_eq!(tower.stages.len(), 3);
    let report = verify_tower(&tower.stages);
    assert!(report.valid, "{report:?}");
    for w in tower.stages.windows(2) {
        assert!(w[1].group.order() >= w[0].group.order());
        assert!(w[1].space.len() > w[0].space.len());
    }
    let last = &tower.stages[2];
    let points = &last.schedule_points;
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(last.space.dist(points[i], points[j]), schedule.dist(i, j));
        }
    }
}
