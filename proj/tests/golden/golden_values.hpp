// Generated by make_goldens.py -- do not edit by hand.
#pragma once

constexpr double kGoldenKl005 = 2.649995081249796414008;  // kl(0.05, 0.95) = 0.9*ln(19)
constexpr double kKlDelta2 = 0.8317766166719343713007;  // kl(0.2, 0.8)
constexpr double kKlFloor2 = 0.7339691750802004389718;  // ln(1/(2.4*0.2))
constexpr double kKlDelta1 = 1.757779661868975506232;  // kl(0.1, 0.9)
constexpr double kKlFloor1 = 1.427116355640145748389;  // ln(1/(2.4*0.1))
constexpr double kKlDelta05 = 2.649995081249796414008;  // kl(0.05, 0.95)
constexpr double kKlFloor05 = 2.120263536200091057806;  // ln(1/(2.4*0.05))
constexpr double kKlDelta01 = 4.503217453131898128315;  // kl(0.01, 0.99)
constexpr double kKlFloor01 = 3.729701448634191432407;  // ln(1/(2.4*0.01))

constexpr double kGoldenBeta = 8.142934632170233874597;  // 1+sqrt(2*ln((T2*K/delta)*ceil(ln(T2/d)/2))), inner ceil = 3.0
constexpr double kGoldenBetaInnerCeil = 3.0;

constexpr double kGoldenLambdaPerp = 14.28584759532123040367;  // T/(d*ln(1+T/lambda))

constexpr double kSvd2x2Sigma1 = 5.000000000000000000000;  // [[1,2],[2,4]] has sigma_1 = 5, u = v = (1,2)/sqrt(5)
constexpr double kSvd2x2U0 = 0.4472135954999579392818;
constexpr double kSvd2x2U1 = 0.8944271909999158785637;

constexpr double kFrozen5x4Sigma1 = 8.027493840402464799279;
constexpr double kFrozen5x4Sigma2 = 5.797747340912490740127;
constexpr double kFrozen5x4Sigma3 = 3.233252047906844009883;
constexpr double kFrozen5x4Sigma4 = 1.221290140772793256696;
constexpr double kFrozen5x4Rank2FrobResid = 3.456221696194072253493;  // = sqrt(s3^2+s4^2)
constexpr double kFrozen5x4Rank2OpResid = 3.233252047906844009883;  // = s3

// policy values for M=[[1,2],[3,0]], uniform rho: [((0, 0), '2.0'), ((0, 1), '0.5'), ((1, 0), '2.5'), ((1, 1), '1.0')]
constexpr double kPolicy2x2Best = 2.500000000000000000000;  // optimal policy picks columns 2,1 (1-based)
constexpr int kPolicy2x2BestArm0 = 1;  // 0-based argmax for context 1
constexpr int kPolicy2x2BestArm1 = 0;
