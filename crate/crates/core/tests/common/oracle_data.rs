// Generated by tests/oracle/gen_oracles.py (mpmath, 60 digits). Do not edit.

/// (order, x, log I_order(x))
pub const LOG_BESSEL_I: &[(f64, f64, f64)] = &[
    (49.0, 100.0, 84.944980103953903133),
    (0.0, 0.5, 0.061549719185481303941),
    (0.0, 1.0, 0.23591435850717864869),
    (0.0, 30.0, 27.38470143317193585),
    (0.0, 700.0, 695.80569999844344908),
    (0.0, 10000.0, 9994.475903781432301),
    (0.5, 3.0, 1.5292734930923128847),
    (1.5, 40.0, 37.211303931754069231),
    (4.0, 2.0, -2.9812660166599048448),
    (4.0, 1000.0, 995.61930489622782387),
    (24.0, 25.0, 11.497155042736417689),
    (24.5, 60.0, 52.060989425457586534),
    (25.0, 0.001, -248.02616670191719436),
    (49.0, 1000000.0, 999992.17210581221324),
    (100.0, 50.0, -35.837833823878304186),
    (1000.0, 100000.0, 99988.3246166507123),
    (4999.0, 1000000.0, 999979.6783255860288),
    (0.0, 1000000.0, 999992.17330631281325),
    (3.5, 1e-05, -45.174990830192494718),
    (10.0, 200.0, 196.18195377680919157),
    (0.5, 1e-08, -9.4361317246209101518),
    (2.0, 18.0, 15.528759356899166848),
    (2.0, 45.0, 42.135596828295703757),
    (7.0, 33.0, 29.585608908173305209),
    (60.0, 5.0, -133.54835497187998001),
    (12.5, 150.0, 146.05430472996337013),
    (0.0, 19.9, 17.492149818621351986),
    (0.0, 20.1, 17.687083876788979734),
];

/// (d, kappa, I_{d/2}(kappa) / I_{d/2-1}(kappa))
pub const BESSEL_RATIO: &[(usize, f64, f64)] = &[
    (2, 1e-06, 4.999999999999375e-7),
    (2, 0.01, 0.0049999375010416487633),
    (2, 0.5, 0.24249961258080194535),
    (2, 2.0, 0.69777465796400798201),
    (2, 17.34, 0.97072276411679496573),
    (2, 100.0, 0.99498737300516876559),
    (2, 1000.0, 0.9994998748748042802),
    (2, 10000.0, 0.99994999874987498046),
    (2, 100000.0, 0.999994999987499875),
    (2, 1000000.0, 0.99999949999987499987),
    (3, 1e-06, 3.3333333333331111111e-7),
    (3, 0.01, 0.0033333111113227492064),
    (3, 0.5, 0.16395341373865284877),
    (3, 2.0, 0.53731472072754809588),
    (3, 17.34, 0.94232987312572261318),
    (3, 100.0, 0.99),
    (3, 1000.0, 0.999),
    (3, 10000.0, 0.9999),
    (3, 100000.0, 0.99999),
    (3, 1000000.0, 0.999999),
    (4, 1e-06, 2.4999999999998958333e-7),
    (4, 0.01, 0.002499989583398437066),
    (4, 0.5, 0.12371792827832073058),
    (4, 2.0, 0.43312742672231175832),
    (4, 17.34, 0.9148199907264363352),
    (4, 100.0, 0.985037880008156842),
    (4, 1000.0, 0.99850037537549303311),
    (4, 10000.0, 0.99985000375037504923),
    (4, 100000.0, 0.999985000037500375),
    (4, 1000000.0, 0.99999850000037500038),
    (5, 1e-06, 1.9999999999999428571e-7),
    (5, 0.01, 0.0019999942857396824176),
    (5, 0.5, 0.099293556607689764453),
    (5, 2.0, 0.36110665020670827782),
    (5, 17.34, 0.88818912978107744277),
    (5, 100.0, 0.98010101010101010101),
    (5, 1000.0, 0.998001001001001001),
    (5, 10000.0, 0.99980001000100010001),
    (5, 100000.0, 0.99998000010000100001),
    (5, 1000000.0, 0.999998000001000001),
    (7, 1e-06, 1.4285714285714058957e-7),
    (7, 0.01, 0.0014285691610036222112),
    (7, 0.5, 0.071146952173483250658),
    (7, 2.0, 0.2692649787190848062),
    (7, 17.34, 0.83753569599439248325),
    (7, 100.0, 0.97030299907245181903),
    (7, 1000.0, 0.99700300299999097295),
    (7, 10000.0, 0.99970003000299999991),
    (7, 100000.0, 0.999970000300003),
    (7, 1000000.0, 0.999997000003000003),
    (10, 1e-06, 9.9999999999999166667e-8),
    (10, 0.01, 0.00099999916666785714094),
    (10, 0.5, 0.049896203861781465213),
    (10, 2.0, 0.19369123409479722512),
    (10, 17.34, 0.76790636041357676743),
    (10, 100.0, 0.9557951728812474206),
    (10, 1000.0, 0.99550788285570415094),
    (10, 10000.0, 0.99955007875787307946),
    (10, 100000.0, 0.99995500078750787481),
    (10, 1000000.0, 0.99999550000787500787),
    (16, 1e-06, 6.2499999999999782986e-8),
    (16, 0.01, 0.00062499978298624674469),
    (16, 0.5, 0.031222915572631049613),
    (16, 2.0, 0.12330606886026776842),
    (16, 17.34, 0.64983300294694432971),
    (16, 100.0, 0.92745916210972275987),
    (16, 1000.0, 0.99252439911338033956),
    (16, 10000.0, 0.99925024377434893807),
    (16, 100000.0, 0.99992500243752437239),
    (16, 1000000.0, 0.99999250002437502437),
    (25, 1e-06, 3.9999999999999940741e-8),
    (25, 0.01, 0.00039999994074075708812),
    (25, 0.5, 0.019992597696972264444),
    (25, 2.0, 0.079531089540215305247),
    (25, 17.34, 0.51684389410188153478),
    (25, 100.0, 0.88664448209350101343),
    (25, 1000.0, 0.98806606391260078581),
    (25, 10000.0, 0.99880066006579201497),
    (25, 100000.0, 0.99988000660006597921),
    (25, 1000000.0, 0.999988000066000066),
    (50, 1e-06, 1.9999999999999992308e-8),
    (50, 0.01, 0.00019999999230769287749),
    (50, 0.5, 0.0099990386395610975831),
    (50, 2.0, 0.039938643221007416544),
    (50, 17.34, 0.31375706346752579583),
    (50, 100.0, 0.78366071835859606389),
    (50, 1000.0, 0.97578812171736426269),
    (50, 10000.0, 0.99755287903377294302),
    (50, 100000.0, 0.99975502878778746494),
    (50, 1000000.0, 0.99997550028787528783),
    (64, 1e-06, 1.5624999999999996301e-8),
    (64, 0.01, 0.00015624999630089979121),
    (64, 0.5, 0.007812037665568765855),
    (64, 2.0, 0.031220461473644203377),
    (64, 17.34, 0.2539363775022380207),
    (64, 100.0, 0.73238019409658213679),
    (64, 1000.0, 0.9689807403096334821),
    (64, 10000.0, 0.99685480421890450228),
    (64, 100000.0, 0.99968504803797922836),
    (64, 1000000.0, 0.99996850048037548026),
    (99, 1e-06, 1.01010101010101e-8),
    (99, 0.01, 0.00010101009999989899961),
    (99, 0.5, 0.0050503787814426733032),
    (99, 2.0, 0.02019394492004805037),
    (99, 17.34, 0.1701743358533948546),
    (99, 100.0, 0.6223585470597479598),
    (99, 1000.0, 0.95217648432239403398),
    (99, 10000.0, 0.99511176110700077991),
    (99, 100000.0, 0.99951011760116910248),
    (99, 1000000.0, 0.99995100117600117531),
    (100, 1e-06, 9.9999999999999990196e-9),
    (100, 0.01, 0.000099999999019607861991),
    (100, 0.5, 0.0049998774568718232135),
    (100, 2.0, 0.019992162890219578398),
    (100, 17.34, 0.1685645603642268024),
    (100, 100.0, 0.61956561418538862978),
    (100, 1000.0, 0.95170085470763675476),
    (100, 10000.0, 0.99506200487848212264),
    (100, 100000.0, 0.99950512003869318822),
    (100, 1000000.0, 0.99995050120037619966),
    (101, 1e-06, 9.9009900990099000384e-9),
    (101, 0.01, 0.000099009900038355290562),
    (101, 0.5, 0.00495037608714651462),
    (101, 2.0, 0.019794371986459569954),
    (101, 17.34, 0.16698417805341347535),
    (101, 100.0, 0.61679081973625972665),
    (101, 1000.0, 0.9512254744419980579),
    (101, 10000.0, 0.99501225115012343361),
    (101, 100000.0, 0.99950012250121751495),
    (101, 1000000.0, 0.99995000122500122425),
    (256, 1e-06, 3.9062499999999999409e-9),
    (256, 0.01, 0.000039062499940857406912),
    (256, 0.5, 0.001953117607231376331),
    (256, 2.0, 0.0078120269161132637447),
    (256, 17.34, 0.067428777376334088306),
    (256, 100.0, 0.3445393251582564896),
    (256, 1000.0, 0.88054006559127872958),
    (256, 10000.0, 0.98733064856283896623),
    (256, 100000.0, 0.9987258064452393125),
    (256, 1000000.0, 0.99987250806438303187),
    (500, 1e-06, 1.999999999999999992e-9),
    (500, 0.01, 0.000019999999992031872516),
    (500, 0.5, 0.00099999900398603996223),
    (500, 2.0, 0.0039999362570036510609),
    (500, 17.34, 0.034638555297101026046),
    (500, 100.0, 0.19260790640620917985),
    (500, 1000.0, 0.78106343716120328017),
    (500, 10000.0, 0.97535998669953847215),
    (500, 100000.0, 0.99750810006369554645),
    (500, 1000000.0, 0.99975053100040551991),
    (1000, 1e-06, 9.99999999999999999e-10),
    (1000, 0.01, 9.9999999990019960082e-6),
    (1000, 0.5, 0.00049999987524956312471),
    (1000, 2.0, 0.001999992016031681024),
    (1000, 17.34, 0.017334799805934372148),
    (1000, 100.0, 0.099021395665281644495),
    (1000, 1000.0, 0.61818681291010495934),
    (1000, 10000.0, 0.95129435390594034959),
    (1000, 100000.0, 0.99501745008449839045),
    (1000, 1000000.0, 0.99950062450049175036),
    (2000, 1e-06, 4.9999999999999999988e-10),
    (2000, 0.01, 4.9999999998751248751e-6),
    (2000, 0.5, 0.00024999998439061133789),
    (2000, 2.0, 0.000999999001000995008),
    (2000, 17.34, 0.0086693490343660538065),
    (2000, 100.0, 0.049875744147695518272),
    (2000, 1000.0, 0.41425644865126737905),
    (2000, 10000.0, 0.90502810956506117126),
    (2000, 100000.0, 0.99005489929151331387),
    (2000, 1000000.0, 0.9990009990007495),
    (5000, 1e-06, 1.9999999999999999999e-10),
    (5000, 0.01, 1.9999999999920031987e-6),
    (5000, 0.5, 0.00009999999900039986004),
    (5000, 2.0, 0.00039999993602561021953),
    (5000, 17.34, 0.0034679583079600394766),
    (5000, 100.0, 0.019992009584669630421),
    (5000, 1000.0, 0.19258496060707810317),
    (5000, 10000.0, 0.7808050955636692013),
    (5000, 100000.0, 0.97531720442327166511),
    (5000, 1000000.0, 0.99750362249862249649),
    (9999, 1e-06, 1.0001000100010001e-10),
    (9999, 0.01, 1.00010001e-6),
    (9999, 0.5, 0.000050005000375037503125),
    (9999, 2.0, 0.00020001999399940049992),
    (9999, 17.34, 0.0017341682031367037668),
    (9999, 100.0, 0.010000000199920049964),
    (9999, 1000.0, 0.099029412791378956416),
    (9999, 10000.0, 0.6180769099606762603),
    (9999, 100000.0, 0.95125848322193281507),
    (9999, 1000000.0, 0.99501349243546189179),
    (10000, 1e-06, 9.9999999999999999999e-11),
    (10000, 0.01, 9.9999999999900019996e-7),
    (10000, 0.5, 0.000049999999875024995626),
    (10000, 2.0, 0.00019999999200160031968),
    (10000, 17.34, 0.0017339947873589641728),
    (10000, 100.0, 0.0099990003997901358971),
    (10000, 1000.0, 0.099019702113027222822),
    (10000, 10000.0, 0.61804926776803850227),
    (10000, 100000.0, 0.95125373285023809144),
    (10000, 1000000.0, 0.99501299493480816506),
];

/// (d, kappa, log c_d(kappa))
pub const LOG_VMF_NORMALIZER: &[(usize, f64, f64)] = &[
    (100, 50.0, 75.321915356057088655),
    (3, 1.0, -2.6924636085404864266),
    (2, 1.0, -2.0737914249165241323),
    (10, 7.3, -5.4977488118457359714),
    (1000, 10000.0, -6305.0065010420859584),
    (5, 0.001, -3.2702891247105251566),
    (10000, 1000000.0, -940105.32637836934997),
];

pub const ESTEP_RAW_X: [[f64; 4]; 5] = [[0.3, -1.2, 0.8, 0.1], [1.0, 0.2, -0.4, 0.6], [-0.7, 0.5, 0.5, -0.9], [0.05, 0.9, 1.1, 0.3], [2.0, -0.1, 0.3, -0.2]];
pub const ESTEP_RAW_MU: [[f64; 4]; 3] = [[1.0, 0.0, 0.2, 0.1], [0.0, 1.0, 1.0, 0.0], [-0.5, 0.1, 0.2, -1.0]];
pub const ESTEP_KAPPA: [f64; 3] = [2.5, 10.0, 0.7];
pub const ESTEP_ALPHA: [f64; 3] = [0.5, 0.3, 0.2];
pub const ESTEP_TAU: [[f64; 3]; 5] = [
    [0.75778784059868871864, 0.00011605852559484417901, 0.24209610087571643718],
    [0.94047041232023337567, 0.00010106684385960050416, 0.059428520835907023826],
    [0.131804984973586682, 0.20331549948023447358, 0.66487951554617884442],
    [0.04092069267064506094, 0.94045246730540947085, 0.018626840023945468213],
    [0.94988668284197573563, 0.00037288103651675970317, 0.049740436121507504667],
];
pub const ESTEP_LOGLIK: f64 = -11.879276051828498204;
