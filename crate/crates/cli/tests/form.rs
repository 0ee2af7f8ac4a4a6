use qmf::newforms::NewformRegistry;
use qmf::{CycNumber, CycSeries};
use qmf_cli::{evaluate, parse, FormError};

fn eval(text: &str, p: usize) -> qmf_cli::Form {
    evaluate(text, &NewformRegistry::standard(), p).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn ints(s: &CycSeries) -> Vec<i64> {
    s.coeffs().iter().map(|c| c.to_string().parse().unwrap()).collect()
}

#[test]
fn operator_polynomials_match_nested_applications() {
    let a = eval("(D^3+1)G[2,1] - (D^1+1)G[4,1]", 30);
    let b = eval("D^3(G[2,1]) + G[2,1] - D(G[4,1]) - G[4,1]", 30);
    let c = eval("F[1,3,1]", 30);
    assert_eq!(a.series, b.series);
    assert_eq!(a.series, c.series);
    assert_eq!(a.weight, Some(8));
    assert_eq!(c.weight, Some(8));
}

#[test]
fn precedence_of_d_over_products() {
    // D applies to E2 alone, so the product has weight 4 + 2.
    let f = eval("D^1(E2)*E2", 10);
    let g = eval("(D^1(E2))*(E2)", 10);
    assert_eq!(f.series, g.series);
    assert_eq!(f.weight, Some(6));
    let h = eval("4*D^2(Delta)/2", 5);
    assert_eq!(ints(&h.series), vec![0, 2, -192, 4536, -47104]);
}

#[test]
fn constants_and_signs() {
    let f = eval("-3/2 + 3/2", 4);
    assert!(f.series.is_zero());
    let f = eval("1 - 24*G[2,1] - E2", 20);
    assert!(f.series.is_zero());
    assert_eq!(f.weight, Some(2));
    let f = eval("0.5*E2 - E2/2", 20);
    assert!(f.series.is_zero());
}

#[test]
fn metadata() {
    let f = eval("E[4,1.1,3] + dilate[2](E2twist[3])", 5);
    assert_eq!(f.level, Some(6));
    assert_eq!(f.weight, Some(4));
    let f = eval("eta[1^2,11^2]", 5);
    assert_eq!(f.weight, Some(2));
    assert_eq!(f.level, None);
    let f = eval("E[2,3.1,1]", 5);
    assert_eq!(f.level, Some(9));
    assert_eq!(f.series.coeffs()[0], CycNumber::from_i64(0));
}

#[test]
fn macmahon_detector_form() {
    let f = eval("(D^2)(U[1]) - 3*(D^1)(U[1]) + 2*U[1] - 8*U[2]", 40);
    let zero: Vec<usize> = (2..40).filter(|&n| f.series.coeffs()[n] == CycNumber::from_i64(0)).collect();
    assert_eq!(zero, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    let g = eval("(D^2-3*D+2)U[1] - 8*U[2]", 40);
    assert_eq!(f.series, g.series);
}

#[test]
fn parse_errors_carry_positions() {
    let pos = |text: &str| match parse(text) {
        Err(FormError::Parse { pos, .. }) => pos,
        other => panic!("{text}: {other:?}"),
    };
    assert_eq!(pos("E2 +"), 4);
    assert_eq!(pos("D^2 E2"), 4);
    assert_eq!(pos("E[4,1.1]"), 4);
    assert_eq!(pos("Foo"), 0);
    assert_eq!(pos("(E2"), 3);
    assert_eq!(pos("E2 )"), 3);
    assert_eq!(pos("E[4,11,1]"), 4);
}

#[test]
fn evaluation_errors() {
    let r = NewformRegistry::standard();
    for bad in [
        "D^2",
        "E2*D",
        "E2/E2",
        "E2/0",
        "newform[7,2,a]",
        "E[4,2.1,1]",
        "E[3,1.1,1]",
        "G[3,1]",
        "F[3,1,1]",
        "dilate[0](E2)",
    ] {
        assert!(evaluate(bad, &r, 10).is_err(), "{bad}");
    }
}
