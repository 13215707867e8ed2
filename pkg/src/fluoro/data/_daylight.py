"""Tabulated daylight data: D65 relative SPD and the CIE daylight
component functions, 5 nm spacing.  Values follow the standard published
tables; D-series illuminants other than D65 are reconstructed from the
components.
"""

D65_SPD_5NM = {
    300: 0.0341,
    305: 1.6643,
    310: 3.2945,
    315: 11.7652,
    320: 20.236,
    325: 28.6447,
    330: 37.0535,
    335: 38.5011,
    340: 39.9488,
    345: 42.4302,
    350: 44.9117,
    355: 45.775,
    360: 46.6383,
    365: 49.3637,
    370: 52.0891,
    375: 51.0323,
    380: 49.9755,
    385: 52.3118,
    390: 54.6482,
    395: 68.7015,
    400: 82.7549,
    405: 87.1204,
    410: 91.486,
    415: 92.4589,
    420: 93.4318,
    425: 90.057,
    430: 86.6823,
    435: 95.7736,
    440: 104.865,
    445: 110.936,
    450: 117.008,
    455: 117.41,
    460: 117.812,
    465: 116.336,
    470: 114.861,
    475: 115.392,
    480: 115.923,
    485: 112.367,
    490: 108.811,
    495: 109.082,
    500: 109.354,
    505: 108.578,
    510: 107.802,
    515: 106.296,
    520: 104.79,
    525: 106.239,
    530: 107.689,
    535: 106.047,
    540: 104.405,
    545: 104.225,
    550: 104.046,
    555: 102.023,
    560: 100.0,
    565: 98.1671,
    570: 96.3342,
    575: 96.0611,
    580: 95.788,
    585: 92.2368,
    590: 88.6856,
    595: 89.3459,
    600: 90.0062,
    605: 89.8026,
    610: 89.5991,
    615: 88.6489,
    620: 87.6987,
    625: 85.4936,
    630: 83.2886,
    635: 83.4939,
    640: 83.6992,
    645: 81.863,
    650: 80.0268,
    655: 80.1207,
    660: 80.2146,
    665: 81.2462,
    670: 82.2778,
    675: 80.281,
    680: 78.2842,
    685: 74.0027,
    690: 69.7213,
    695: 70.6652,
    700: 71.6091,
    705: 72.979,
    710: 74.349,
    715: 67.9765,
    720: 61.604,
    725: 65.7448,
    730: 69.8856,
    735: 72.4863,
    740: 75.087,
    745: 69.3398,
    750: 63.5927,
    755: 55.0054,
    760: 46.4182,
    765: 56.6118,
    770: 66.8054,
    775: 65.0941,
    780: 63.3828,
}

# wavelength -> (S0, S1, S2)
DAYLIGHT_COMPONENTS_5NM = {
    300: (0.04, 0.02, 0.0),
    305: (3.02, 2.26, 1.0),
    310: (6.0, 4.5, 2.0),
    315: (17.8, 13.45, 3.0),
    320: (29.6, 22.4, 4.0),
    325: (42.45, 32.2, 6.25),
    330: (55.3, 42.0, 8.5),
    335: (56.3, 41.3, 8.15),
    340: (57.3, 40.6, 7.8),
    345: (59.55, 41.1, 7.25),
    350: (61.8, 41.6, 6.7),
    355: (61.65, 39.8, 6.0),
    360: (61.5, 38.0, 5.3),
    365: (65.15, 40.2, 5.7),
    370: (68.8, 42.4, 6.1),
    375: (66.1, 40.45, 4.55),
    380: (63.4, 38.5, 3.0),
    385: (64.6, 36.75, 2.1),
    390: (65.8, 35.0, 1.2),
    395: (80.3, 39.2, 0.05),
    400: (94.8, 43.4, -1.1),
    405: (99.8, 44.85, -0.8),
    410: (104.8, 46.3, -0.5),
    415: (105.35, 45.1, -0.6),
    420: (105.9, 43.9, -0.7),
    425: (101.35, 40.5, -0.95),
    430: (96.8, 37.1, -1.2),
    435: (105.35, 36.9, -1.9),
    440: (113.9, 36.7, -2.6),
    445: (119.75, 36.3, -2.75),
    450: (125.6, 35.9, -2.9),
    455: (125.55, 34.25, -2.85),
    460: (125.5, 32.6, -2.8),
    465: (123.4, 30.25, -2.7),
    470: (121.3, 27.9, -2.6),
    475: (121.3, 26.1, -2.6),
    480: (121.3, 24.3, -2.6),
    485: (117.4, 22.2, -2.2),
    490: (113.5, 20.1, -1.8),
    495: (113.3, 18.15, -1.65),
    500: (113.1, 16.2, -1.5),
    505: (111.95, 14.7, -1.4),
    510: (110.8, 13.2, -1.3),
    515: (108.65, 10.9, -1.25),
    520: (106.5, 8.6, -1.2),
    525: (107.65, 7.35, -1.1),
    530: (108.8, 6.1, -1.0),
    535: (107.05, 5.15, -0.75),
    540: (105.3, 4.2, -0.5),
    545: (104.85, 3.05, -0.4),
    550: (104.4, 1.9, -0.3),
    555: (102.2, 0.95, -0.15),
    560: (100.0, 0.0, 0.0),
    565: (98.0, -0.8, 0.1),
    570: (96.0, -1.6, 0.2),
    575: (95.55, -2.55, 0.35),
    580: (95.1, -3.5, 0.5),
    585: (92.1, -3.5, 1.3),
    590: (89.1, -3.5, 2.1),
    595: (89.8, -4.65, 2.65),
    600: (90.5, -5.8, 3.2),
    605: (90.4, -6.5, 3.65),
    610: (90.3, -7.2, 4.1),
    615: (89.35, -7.9, 4.4),
    620: (88.4, -8.6, 4.7),
    625: (86.2, -9.05, 4.9),
    630: (84.0, -9.5, 5.1),
    635: (84.55, -10.2, 5.9),
    640: (85.1, -10.9, 6.7),
    645: (83.5, -10.8, 7.0),
    650: (81.9, -10.7, 7.3),
    655: (82.25, -11.35, 7.95),
    660: (82.6, -12.0, 8.6),
    665: (83.75, -13.0, 9.2),
    670: (84.9, -14.0, 9.8),
    675: (83.1, -13.8, 10.0),
    680: (81.3, -13.6, 10.2),
    685: (76.6, -12.8, 9.25),
    690: (71.9, -12.0, 8.3),
    695: (73.1, -12.65, 8.95),
    700: (74.3, -13.3, 9.6),
    705: (75.35, -13.1, 9.05),
    710: (76.4, -12.9, 8.5),
    715: (69.85, -11.75, 7.75),
    720: (63.3, -10.6, 7.0),
    725: (67.5, -11.1, 7.3),
    730: (71.7, -11.6, 7.6),
    735: (74.35, -11.9, 7.8),
    740: (77.0, -12.2, 8.0),
    745: (71.1, -11.2, 7.35),
    750: (65.2, -10.2, 6.7),
    755: (56.45, -9.0, 5.95),
    760: (47.7, -7.8, 5.2),
    765: (58.15, -9.5, 6.3),
    770: (68.6, -11.2, 7.4),
    775: (66.8, -10.8, 7.1),
    780: (65.0, -10.4, 6.8),
    785: (65.5, -10.5, 6.9),
    790: (66.0, -10.6, 7.0),
    795: (63.5, -10.15, 6.7),
    800: (61.0, -9.7, 6.4),
    805: (57.15, -9.0, 5.95),
    810: (53.3, -8.3, 5.5),
    815: (56.1, -8.8, 5.8),
    820: (58.9, -9.3, 6.1),
    825: (60.4, -9.55, 6.3),
    830: (61.9, -9.8, 6.5),
}
