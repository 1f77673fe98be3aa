//! Worked examples, frozen outputs and spot values.

use stratavol::completed::ReportJson;
use stratavol::exact::int;
use stratavol::reference::{EXAMPLES, MU422, MU53};
use stratavol::ribbon::{alpha_brute, alpha_closed, f_count, g_count, s_sum, vandermonde_check, StarData};
use stratavol::{
    completed_volume, enumerate_special_stars, enumerate_sunflowers, fmt_rational, mv_convert, parse_rational,
    parse_table, rat, render, vol_q0_two_poles, vol_sf_bottom, Error, Format, Signature, TwoLevelGraph, VolumeKind,
    VolumeTable,
};

fn report_for(ex: &stratavol::reference::Example) -> stratavol::Report {
    completed_volume(ex.k, ex.mu, &ex.volumes().unwrap()).unwrap()
}

#[test]
fn example_rows_match_by_serialization() {
    for ex in EXAMPLES {
        let report = report_for(&ex);
        assert_eq!(report.main_vol, parse_rational(ex.rows[0].total).unwrap(), "{}", ex.name);
        assert_eq!(report.contributions.len() + 1, ex.rows.len(), "{}", ex.name);
        for row in &ex.rows[1..] {
            let c = report
                .contributions
                .iter()
                .find(|c| Some(c.graph.canonical().as_str()) == row.graph)
                .unwrap_or_else(|| panic!("{} row {} not produced", ex.name, row.label));
            assert_eq!(fmt_rational(&c.prefactor), row.prefactor, "{} {}", ex.name, row.label);
            assert_eq!(c.kappa_prod.to_string(), row.kappa_prod, "{} {}", ex.name, row.label);
            assert_eq!(fmt_rational(&c.vol_prod), row.vol_prod, "{} {}", ex.name, row.label);
            assert_eq!(fmt_rational(&c.total), row.total, "{} {}", ex.name, row.label);
        }
        assert_eq!(report.completed_vol, ex.completed_value(), "{}", ex.name);
    }
}

#[test]
fn quadratic_example_total_and_normalization() {
    let r = report_for(&MU53);
    assert_eq!(fmt_rational(&r.completed_vol), "-73/448");
    assert_eq!(r.mv_value.unwrap().to_string(), "73/420*pi^6");
    assert!(report_for(&MU422).mv_value.is_none());
}

#[test]
fn table_render_ends_with_total() {
    let text = render(&report_for(&MU53), Format::Table);
    assert!(text.trim_end().ends_with("completed = -73/448"), "{text}");
    let text = render(&report_for(&MU422), Format::Table);
    assert!(text.trim_end().ends_with("completed = 1/960"), "{text}");
}

#[test]
fn csv_render_is_crlf_with_one_row_per_graph() {
    let csv = render(&report_for(&MU53), Format::Csv);
    let lines: Vec<&str> = csv.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert_eq!(lines[0], "label,graph,prefactor,kappa_prod,vol_prod,total");
    assert_eq!(lines.len(), 1 + 7 + 1);
    assert_eq!(*lines.last().unwrap(), "completed,,,,,-73/448");
}

#[test]
fn json_round_trip() {
    for ex in EXAMPLES {
        let report = report_for(&ex);
        let text = render(&report, Format::Json);
        let parsed: ReportJson = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, ReportJson::from_report(&report));
        assert_eq!(parsed.verify().unwrap(), report.completed_vol);
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
    }
}

#[test]
fn json_verify_rejects_tampering() {
    let mut j = ReportJson::from_report(&report_for(&MU53));
    j.rows[0].total = "1".into();
    assert!(j.verify().is_err());
}

#[test]
fn graph_round_trip_through_json() {
    for g in enumerate_sunflowers(1, &[4, 2, -2]).unwrap() {
        let text = serde_json::to_string(&g).unwrap();
        let back: TwoLevelGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }
}

#[test]
fn vertex_signatures_of_named_graphs() {
    let sig = Signature::new(2, vec![5, 3]).unwrap();
    let d4 = TwoLevelGraph::sunflower(&sig, &[(1, vec![1])]);
    let text: Vec<String> = d4.vertex_signatures().unwrap().iter().map(|s| s.to_string()).collect();
    assert_eq!(text, ["k=2:(5,-1)", "k=1:(0)", "k=2:(3,-3,-4)"]);
    let d1 = TwoLevelGraph::special_star(&sig, &[3]);
    let text: Vec<String> = d1.vertex_signatures().unwrap().iter().map(|s| s.to_string()).collect();
    assert_eq!(text, ["k=1:(4)", "k=2:(5,3,-12)"]);

    let sig = Signature::new(1, vec![4, 2, -2]).unwrap();
    let d2 = TwoLevelGraph::sunflower(&sig, &[(0, vec![1, 1])]);
    let text: Vec<String> = d2.vertex_signatures().unwrap().iter().map(|s| s.to_string()).collect();
    assert_eq!(text, ["k=1:(2,-2,0)", "k=1:(0)", "k=1:(0)", "k=1:(4,-2,-2,-2)"]);
}

#[test]
fn star_counts() {
    assert_eq!(enumerate_special_stars(2, &[5, 3]).unwrap().len(), 3);
    assert_eq!(enumerate_special_stars(1, &[4, 2, -2]).unwrap().len(), 0);
    assert_eq!(enumerate_sunflowers(2, &[1, 1, 1, 1]).unwrap().len(), 0);
}

#[test]
fn missing_volumes_are_listed_in_full() {
    let err = completed_volume(1, &[4, 2, -2], &VolumeTable::new()).unwrap_err();
    assert_eq!(
        err.missing_table_lines(),
        [
            "k=1; mu=0; vol=",
            "k=1; mu=0,0,-2; vol=",
            "k=1; mu=2; vol=",
            "k=1; mu=2,-2,-2; vol=",
            "k=1; mu=2,0,-2; vol=",
            "k=1; mu=2,2,-2; vol=",
            "k=1; mu=4,-2,-2,-2; vol=",
            "k=1; mu=4,-2,-4; vol=",
            "k=1; mu=4,0,-2; vol=",
            "k=1; mu=4,2,-2; vol=",
        ]
    );
}

#[test]
fn duplicate_keys_are_rejected_with_line_numbers() {
    let err = parse_table("# header\nk=1; mu=0; vol=1\nk=1; mu=0; vol=2\n").unwrap_err();
    assert!(matches!(err, Error::DuplicateKey { line: 3, .. }), "{err:?}");
    let err = parse_table("k=1; mu=2,0; vol=1\nk=1; mu=0,2; vol=1\n").unwrap_err();
    assert!(matches!(err, Error::DuplicateKey { line: 2, .. }), "{err:?}");
    let err = parse_table("k=1; mu=0; vol=x\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
}

#[test]
fn closed_form_values() {
    assert_eq!(vol_q0_two_poles(5, 3, &[3]).unwrap(), int(1));
    assert_eq!(vol_q0_two_poles(5, 3, &[2, 1]).unwrap(), int(6));
    assert_eq!(vol_q0_two_poles(5, 3, &[1, 1, 1]).unwrap(), int(30));
    assert_eq!(vol_sf_bottom(3, 1).unwrap(), int(1));
    assert_eq!(vol_sf_bottom(5, 3).unwrap(), int(15));
    assert!(vol_sf_bottom(4, 1).is_err());
}

#[test]
fn normalization_values() {
    let h2 = Signature::new(1, vec![2]).unwrap();
    let v = mv_convert(&h2, &rat(1, 80), VolumeKind::StratumVolume).unwrap();
    assert_eq!(v.to_string(), "1/15*pi^4");
    let v = mv_convert(&h2, &int(1), VolumeKind::StratumVolume).unwrap();
    assert_eq!(v.to_string(), "16/3*pi^4");
    let bad = Signature::new(1, vec![4, 2, -2]).unwrap();
    assert!(matches!(
        mv_convert(&bad, &int(1), VolumeKind::CompletedVolume),
        Err(Error::UnsupportedConversion(_))
    ));
}

#[test]
fn ribbon_spot_values() {
    assert_eq!(alpha_closed(1, 2, 9, &[2], 1).unwrap(), int(-6));
    assert_eq!(alpha_brute(1, 2, 9, &[2], 1).unwrap(), int(-6));
    assert_eq!(s_sum(5, 3, &[1], &[1]).unwrap(), int(0));
    assert!(vandermonde_check(7, &[1, 1], 2).unwrap());
    let d = StarData::new(5, 3, vec![2, 1]).unwrap();
    assert_eq!(g_count(&d).unwrap(), int(6) * int(3) * int(1));
    assert_eq!(f_count(&d).unwrap(), g_count(&d).unwrap());
}

#[test]
fn f_count_known_deficits_are_frozen() {
    // Instances where the displayed sum falls short; see the README.
    let frozen = [
        ((3, 1, vec![1, 1]), (2, 3)),
        ((5, 3, vec![1, 1, 1]), (27, 30)),
        ((7, 1, vec![2, 1]), (18, 21)),
        ((11, 1, vec![1, 1, 1, 1]), (396, 693)),
        ((15, 1, vec![2, 1, 1, 1]), (4680, 6435)),
    ];
    for ((m1, m2, gs), (f, g)) in frozen {
        let d = StarData::new(m1, m2, gs).unwrap();
        assert_eq!((f_count(&d).unwrap(), g_count(&d).unwrap()), (int(f), int(g)), "{d:?}");
    }
}
