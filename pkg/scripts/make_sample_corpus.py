#!/usr/bin/env python3
"""Regenerate data/sample_corpus.jsonl, the bundled five-judgment corpus.

The judgments are synthetic but follow the civil-senate layout: facts
section, reasons section whose subsection I recaps the lower courts (and is
excluded from the evaluable text), analysis in II, outcome in III, plus a
gold guiding principle. Entity mentions (statutes, decision citations) are
planted for the enrichment and audit paths.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from leitsatz.corpus import CorpusStore, Judgment, Section, Subsection, export_jsonl

JUDGMENTS = [
    Judgment(
        id="viii-zr-101-19",
        date="2019-11-06",
        court="BGH VIII. Zivilsenat",
        sections=[
            Section(
                heading="Tatbestand",
                body=(
                    "Die Klägerin vermietete dem Beklagten eine Wohnung in Berlin. "
                    "Der Beklagte zahlte die Miete für drei aufeinanderfolgende Monate nicht. "
                    "Die Klägerin erklärte daraufhin die fristlose Kündigung und verlangte Räumung."
                ),
            ),
            Section(
                heading="Entscheidungsgründe",
                subsections=[
                    Subsection(
                        label="I.",
                        body=(
                            "Das Berufungsgericht hat einen Kündigungsgrund verneint und die "
                            "Räumungsklage abgewiesen. Es hat gemeint, die Nachzahlung eines "
                            "Monatsbetrags heile den Verzug insgesamt."
                        ),
                    ),
                    Subsection(
                        label="II.",
                        body=(
                            "Diese Beurteilung hält der revisionsrechtlichen Nachprüfung nicht stand. "
                            "Nach § 543 Abs. 2 Satz 1 Nr. 3 BGB liegt ein wichtiger Grund vor, wenn der "
                            "Mieter für zwei aufeinanderfolgende Termine mit einem erheblichen Teil der "
                            "Miete in Verzug ist. Der Rückstand des Beklagten überstieg zwei Monatsmieten "
                            "und war damit erheblich. Eine Teilzahlung lässt den bereits entstandenen "
                            "Kündigungsgrund nicht entfallen, sondern wirkt nur unter den Voraussetzungen "
                            "des § 569 Abs. 3 Nr. 2 BGB. Diese Schonfristzahlung setzt den vollständigen "
                            "Ausgleich der fälligen Miete voraus. Das entspricht der ständigen Rechtsprechung "
                            "des Senats und wird durch BGH, Urteil vom 19. September 2018 - VIII ZR 231/17 bestätigt."
                        ),
                    ),
                    Subsection(
                        label="III.",
                        body=(
                            "Das Berufungsurteil ist danach aufzuheben. Der Senat entscheidet in der Sache "
                            "selbst und gibt der Räumungsklage statt, weil weitere Feststellungen nicht zu "
                            "erwarten sind."
                        ),
                    ),
                ],
            ),
        ],
        gold_guiding_principles=(
            "Ein wichtiger Grund zur fristlosen Kündigung nach § 543 Abs. 2 Satz 1 Nr. 3 BGB "
            "entfällt nicht durch eine bloße Teilzahlung; die Schonfristzahlung des § 569 Abs. 3 "
            "Nr. 2 BGB verlangt den vollständigen Ausgleich des Rückstands."
        ),
    ),
    Judgment(
        id="i-zr-54-20",
        date="2020-07-23",
        court="BGH I. Zivilsenat",
        sections=[
            Section(
                heading="Tatbestand",
                body=(
                    "Die Parteien vertreiben Nahrungsergänzungsmittel. Die Beklagte bewarb ihr "
                    "Produkt mit einer klinisch belegten Wirkung, ohne dass eine Studie vorlag. "
                    "Die Klägerin nimmt sie auf Unterlassung in Anspruch."
                ),
            ),
            Section(
                heading="Entscheidungsgründe",
                subsections=[
                    Subsection(
                        label="I.",
                        body=(
                            "Das Oberlandesgericht hat den Unterlassungsanspruch bejaht, die Werbung "
                            "jedoch nur teilweise untersagt. Dagegen wenden sich beide Parteien mit "
                            "ihren Revisionen."
                        ),
                    ),
                    Subsection(
                        label="II.",
                        body=(
                            "Die Revision der Beklagten bleibt ohne Erfolg. Eine geschäftliche Handlung "
                            "ist nach § 5 Abs. 1 UWG irreführend, wenn sie zur Täuschung geeignete Angaben "
                            "über wesentliche Merkmale der Ware enthält. Wer mit einer fachlich umstrittenen "
                            "Wirkaussage wirbt, übernimmt die Verantwortung für ihre Richtigkeit. Den "
                            "Nachweis hat die Beklagte nicht geführt. Der Unterlassungsanspruch folgt aus "
                            "§ 8 Abs. 1 UWG und erstreckt sich auf kerngleiche Verletzungsformen, vgl. BGH, "
                            "Urteil vom 24. September 2013 - I ZR 89/12. Auf die weitergehende Revision der "
                            "Klägerin ist das Verbot auf alle angegriffenen Werbeaussagen zu erstrecken."
                        ),
                    ),
                    Subsection(
                        label="III.",
                        body=(
                            "Die Kostenentscheidung beruht auf § 92 Abs. 1 ZPO. Einer Vorlage an den "
                            "Gerichtshof der Europäischen Union bedarf es nicht."
                        ),
                    ),
                ],
            ),
        ],
        gold_guiding_principles=(
            "Wer im Wettbewerb mit einer fachlich umstrittenen gesundheitsbezogenen Wirkaussage "
            "wirbt, trägt die Darlegungs- und Beweislast für deren Richtigkeit; fehlt der Nachweis, "
            "ist die Werbung nach § 5 Abs. 1 UWG irreführend."
        ),
    ),
    Judgment(
        id="vii-zr-192-18",
        date="2019-05-16",
        court="BGH VII. Zivilsenat",
        sections=[
            Section(
                heading="Tatbestand",
                body=(
                    "Der Kläger beauftragte die Beklagte mit dem Bau eines Einfamilienhauses auf "
                    "der Grundlage eines Formularvertrags der Beklagten. Der Vertrag sah vor, dass "
                    "Abschlagszahlungen unabhängig vom Bautenstand fällig werden. Der Kläger hält "
                    "diese Klausel für unwirksam."
                ),
            ),
            Section(
                heading=" Entscheidungsgründe ",
                subsections=[
                    Subsection(
                        label="I",
                        body=(
                            "Die Vorinstanzen haben der Klage stattgegeben. Das Landgericht hat die "
                            "Klausel für überraschend gehalten, das Oberlandesgericht hat sie an den "
                            "Klauselverboten gemessen."
                        ),
                    ),
                    Subsection(
                        label="II",
                        body=(
                            "Die Revision der Beklagten ist unbegründet. Die Klausel benachteiligt den "
                            "Besteller entgegen den Geboten von Treu und Glauben unangemessen und ist "
                            "nach § 307 Abs. 1 Satz 2 BGB unwirksam, weil sie die Fälligkeit der "
                            "Abschläge nicht klar und verständlich regelt. Eine Klausel über "
                            "Abschlagszahlungen muss den erreichten Bautenstand als Bezugspunkt erkennen "
                            "lassen. Daran fehlt es hier. Ob die Klausel zudem nach § 305c Abs. 1 BGB "
                            "überraschend ist, kann offenbleiben."
                        ),
                    ),
                    Subsection(
                        label="III",
                        body=(
                            "Die Revision ist daher mit der Kostenfolge des § 97 Abs. 1 ZPO "
                            "zurückzuweisen. Auf die Anschlussrevision kommt es nicht mehr an."
                        ),
                    ),
                ],
            ),
        ],
        gold_guiding_principles=(
            "Eine Formularklausel über Abschlagszahlungen beim Verbraucherbauvertrag, die die "
            "Fälligkeit nicht an den erreichten Bautenstand knüpft, verstößt gegen das "
            "Transparenzgebot des § 307 Abs. 1 Satz 2 BGB und ist unwirksam."
        ),
    ),
    Judgment(
        id="iv-zr-77-21",
        date="2021-12-01",
        court="BGH IV. Zivilsenat",
        sections=[
            Section(
                heading="Tatbestand",
                body=(
                    "Der Kläger verlangt aus einer Bürgschaft Zahlung von 50.000 Euro. Die "
                    "Bürgschaftserklärung des Beklagten wurde per einfacher E-Mail übermittelt. "
                    "Der Beklagte beruft sich auf einen Formmangel."
                ),
            ),
            Section(
                heading="Entscheidungsgründe",
                subsections=[
                    Subsection(
                        label="I",
                        body=(
                            "Das Berufungsgericht hat die Klage abgewiesen, weil die Bürgschaft der "
                            "Schriftform entbehre. Hiergegen richtet sich die Revision des Klägers."
                        ),
                    ),
                    Subsection(
                        label="II",
                        body=(
                            "Die Revision hat keinen Erfolg. Die Erteilung der Bürgschaftserklärung "
                            "bedarf nach § 766 Satz 1 BGB der schriftlichen Form. Eine einfache E-Mail "
                            "wahrt diese Form nicht, weil es an der eigenhändigen Unterschrift im Sinne "
                            "des § 126 Abs. 1 BGB fehlt. Ein Rechtsgeschäft, das der gesetzlich "
                            "vorgeschriebenen Form ermangelt, ist nach § 125 BGB nichtig. Die "
                            "elektronische Form des § 126a BGB hätte eine qualifizierte elektronische "
                            "Signatur vorausgesetzt, an der es hier fehlt. Treuwidrig beruft sich der "
                            "Beklagte auf den Mangel nicht, denn besondere Umstände liegen nicht vor."
                        ),
                    ),
                    Subsection(
                        label="III",
                        body=(
                            "Die Kostenentscheidung folgt aus § 97 Abs. 1 ZPO. Eine Zulassung weiterer "
                            "Rügen kam nicht in Betracht."
                        ),
                    ),
                ],
            ),
        ],
        gold_guiding_principles=(
            "Eine durch einfache E-Mail übermittelte Bürgschaftserklärung wahrt die Schriftform "
            "des § 766 Satz 1 BGB nicht; das Rechtsgeschäft ist nach § 125 BGB nichtig, wenn auch "
            "die Voraussetzungen des § 126a BGB nicht erfüllt sind."
        ),
    ),
    Judgment(
        id="iii-zr-3-22",
        date="2022-03-10",
        court="BGH III. Zivilsenat",
        sections=[
            Section(
                heading="Tatbestand",
                body=(
                    "Der Kläger nimmt die beklagte Gemeinde wegen eines Sturzes auf einem "
                    "unstreitig schadhaften Gehweg in Anspruch. Die Gemeinde hatte den Weg seit "
                    "Monaten nicht kontrolliert."
                ),
            ),
            Section(
                heading="Entscheidungsgründe",
                subsections=[
                    Subsection(
                        label="I.",
                        body=(
                            "Die Vorinstanz hat der Klage nur zur Hälfte stattgegeben und dem Kläger "
                            "ein Mitverschulden angelastet. Beide Parteien haben Revision eingelegt."
                        ),
                    ),
                    Subsection(
                        label="II.",
                        body=(
                            "Die Revision der Beklagten ist unbegründet. Die Verletzung der "
                            "Verkehrssicherungspflicht begründet einen Anspruch aus § 839 Abs. 1 BGB in "
                            "Verbindung mit Art. 34 GG, wenn die Gefahrenlage bei der gebotenen Kontrolle "
                            "erkennbar gewesen wäre. Eine Kontrolle in angemessenen Abständen hat hier über "
                            "Monate gefehlt. Das begründet den Fahrlässigkeitsvorwurf, vgl. BGH, Beschluss "
                            "vom 12. Januar 2021 - III ZR 210/19. Die Revision des Klägers hat dagegen "
                            "Erfolg, weil das Mitverschulden ohne tragfähige Feststellungen angenommen "
                            "worden ist. Ein Fußgänger darf auf einen ordnungsgemäßen Zustand des Gehwegs "
                            "grundsätzlich vertrauen."
                        ),
                    ),
                ],
            ),
        ],
        gold_guiding_principles=(
            "Unterlässt der Träger der Straßenbaulast über Monate jede Kontrolle eines Gehwegs, "
            "haftet er bei einem Sturz aus § 839 Abs. 1 BGB in Verbindung mit Art. 34 GG; ein "
            "Mitverschulden des Fußgängers bedarf tragfähiger Feststellungen."
        ),
    ),
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parent.parent / "data" / "sample_corpus.jsonl"),
    )
    args = parser.parse_args()
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    export_jsonl(CorpusStore(JUDGMENTS), out)
    print(f"wrote {len(JUDGMENTS)} judgments -> {out}")


if __name__ == "__main__":
    main()
