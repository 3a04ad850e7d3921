// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The factx Authors

#ifndef FACTX_PROMPT_DEFAULTS_HPP
#define FACTX_PROMPT_DEFAULTS_HPP

#include <string>
#include <vector>

#include "factx/extract_llm.hpp"
#include "factx/sparing.hpp"

namespace factx {

inline const std::string& default_instruction_text() {
    static const std::string text = R"fx(You help researchers analyse criminal court decisions. Read the decision at the end of this message and return its factual statement.

What the factual statement is. In the operative part of a criminal judgment the court describes the concrete conduct for which the defendant is convicted. That description says when and where the conduct took place, what the defendant did, against whom or against what property it was directed, and what consequence followed, such as the damage caused or the injury inflicted. This description of the act is the factual statement.

What to leave out. Return only the description of the conduct. Leave out the legal evaluation of the act: the name of the offence, the statutory provisions and paragraph numbers, and the words that connect the conduct to that legal evaluation. Leave out the sentence and any other penalty, the identification of the defendant, the procedural history, and everything in the reasoning. Do not include the expression that introduces the statement or the expression that closes it.

Copy, do not rewrite. The statement must be copied exactly as it appears in the decision, character for character, including spelling mistakes, unusual spacing and line breaks. Do not translate, summarise, shorten, correct, reorder or complete the text, and do not add words of your own. Your answer will be compared with the source text character by character, and any text that cannot be found in the decision will be discarded.

Several acts. When the judgment describes several acts for which the defendant is convicted, return the whole passage from the first word of the first act to the last word of the last act, including the connecting words between the acts.

No statement. Some decisions contain no factual statement: a decision that acquits the defendant, a decision that only settles a procedural question, or a decision whose operative part is missing from the text. In that case return null in the output field. Never invent a statement and never describe the conduct in your own words.

Where to look. The statement usually sits in the operative part near the beginning of the decision, after the heading and the identification of the court and the parties, and before the reasoning. Headings in these decisions are often printed with spaces between the letters. The expressions listed below usually mark where the statement begins and where it ends. Their spelling may be broken by extra spaces or line breaks left behind by document conversion, and some decisions use other wording altogether, so rely on the meaning of the text when the expressions are missing.

Spacing and line breaks. The decisions were converted from PDF files, so words can be split by stray spaces, sentences can be broken across lines, and headings can appear letter by letter. Keep all of this unchanged in your answer. The comparison with the source tolerates differences in whitespace, but it does not tolerate changed words. If you are unsure where the statement ends, stop before the legal evaluation of the act rather than after it. Copy dates, amounts and names into the answer exactly as they appear.)fx";
    return text;
}

inline const std::string& default_output_schema() {
    static const std::string text = R"fx(Return exactly one JSON object and no other text:
{"fact_sentence": "<the factual statement copied verbatim from the decision, or null if the decision contains none>"}
The value must be a JSON string with standard escaping, or null.)fx";
    return text;
}

// Excerpts come from the synthetic fixture generator (seed 2026, English profile).
inline const std::vector<Exemplar>& default_exemplars() {
    static const std::vector<Exemplar> exemplars{
        {R"fx(District Court Nitra
Docket No.: 7T/586/2020

J U D G M E N T

The District Court Nitra, by the single judge JUDr. Tomáš Čech, in the criminal matter against the defendant Radoslav Čech, born on 16 July 1991 in Levice, residing at Krátka 174, Levice, for the offence of burglary under Section 378 of the Criminal Code, at the main hearing held on 2 June 2020, has decided as follows:

The defendant Radoslav Čech
they are guilty that on 14 February 2020 at around 18:19 in Martin, at Ružová street number 130, he broke the lock on the garage door with his own tool and removed power tools of the brand Makita, after which he left the scene on foot, and subsequently he persuaded the
injured party Michal Kráľ to transfer building material worth EUR 3027 to his bank account, claiming false facts about his financial situation, which was recorded by the security camera,
causing damage to the injured party Michal Kráľ in the amount
of EUR 916 thus committed the offence of burglary under Section 378 paragraph 3 of the Criminal Code,
and is sentenced to community service in the extent of 5 hours.)fx",
         R"fx(on 14 February 2020 at around 18:19 in Martin, at Ružová street number 130, he broke the lock on the garage door with his own tool and removed power tools of the brand Makita, after which he left the scene on foot, and subsequently he persuaded the
injured party Michal Kráľ to transfer building material worth EUR 3027 to his bank account, claiming false facts about his financial situation, which was recorded by the security camera,
causing damage to the injured party Michal Kráľ in the amount
of EUR 916)fx"},
        {R"fx(District Court Košice
Docket No.: 6T/12/2019

J U D G M E N T

I N   T H E   N A M E   O F   T H E   S L O V A K   R E P U B L I C

The District Court Košice, by the single judge JUDr. Martin Oravec, in the criminal matter against the defendant Marek Tóth, born on 19 December 1966 in Trenčín, residing at Mierová 147, Trenčín, for the offence of bodily harm under Section 330 of the Criminal Code, at the main hearing held on 7 February 2019, has decided as follows:

The defendant Marek Tóth
is acknowledged as guilty that on 17 March 2019 at around 22:38 in Banská Bystrica, at Nová
street number 49, he persuaded the injured party Jozef Šimko to transfer two bottles of spirits to his bank account, claiming false facts about his financial situation, and later sold the items to an unknown person, and subsequently he forged the signature of the injured party Jozef Šimko on the loan agreement and obtained building material worth EUR 4343, after which he left the scene on foot, and subsequently he drove the passenger car
along the public road while under the influence of alcohol,
with the breath test showing 1.2 per mille, after which he left the scene on foot, causing damage to the injured party Jozef
Šimko in the amount of EUR 2790 there fore committed the offence of bodily harm under Section 330 paragraph 1 of the Criminal Code,
and is sentenced to imprisonment for the term of 3 months, conditionally suspended for the probation period of 33 months.)fx",
         R"fx(on 17 March 2019 at around 22:38 in Banská Bystrica, at Nová
street number 49, he persuaded the injured party Jozef Šimko to transfer two bottles of spirits to his bank account, claiming false facts about his financial situation, and later sold the items to an unknown person, and subsequently he forged the signature of the injured party Jozef Šimko on the loan agreement and obtained building material worth EUR 4343, after which he left the scene on foot, and subsequently he drove the passenger car
along the public road while under the influence of alcohol,
with the breath test showing 1.2 per mille, after which he left the scene on foot, causing damage to the injured party Jozef
Šimko in the amount of EUR 2790)fx"},
        {R"fx(District Court Levice
Docket No.: 8T/779/2018

J U D G M E N T

I N   T H E   N A M E   O F   T H E   S L O V A K   R E P U B L I C

The District Court Levice, by the single judge JUDr. Tomáš Novák, in the criminal matter against the defendant Michal Varga, born on 6 April 1971 in Prešov, residing at Ružová 56, Prešov, for the offence of dangerous threatening under Section 333 of the Criminal Code, at the main hearing held on 13 June 2018, has decided as follows:

The court holds the defendant Michal Varga liable for the following act:
on 15 June 2018 at around 19:27 in Trenčín, at Krátka street
number 20, he climbed over the fence of the construction site in Košice and carried away the laptop computer of the brand Lenovo, while the injured party was not present, and subsequently he removed cash in the amount of EUR 5686 from the parked motor vehicle after breaking its side window, and subsequently he
climbed over the fence of the construction site in Šaľa and carried away two bottles of spirits, even though he had been convicted for similar conduct in the past, causing damage to
the injured party Ján Szabó in the amount of EUR 704 therefore committed the offence of dangerous threatening under Section 333 paragraph 4 of the Criminal Code,
and is sentenced to community service in the extent of 16 hours.)fx",
         R"fx(on 15 June 2018 at around 19:27 in Trenčín, at Krátka street
number 20, he climbed over the fence of the construction site in Košice and carried away the laptop computer of the brand Lenovo, while the injured party was not present, and subsequently he removed cash in the amount of EUR 5686 from the parked motor vehicle after breaking its side window, and subsequently he
climbed over the fence of the construction site in Šaľa and carried away two bottles of spirits, even though he had been convicted for similar conduct in the past, causing damage to
the injured party Ján Szabó in the amount of EUR 704)fx"},
        {R"fx(District Court Banská Bystrica
Docket No.: 1T/768/2018

J U D G M E N T

I N   T H E   N A M E   O F   T H E   S L O V A K   R E P U B L I C

The District Court Banská Bystrica, by the single judge JUDr. Dušan Baláž, in the criminal matter against the defendant Dušan Lukáč, born on 16 November 1965 in Senica, residing at Hviezdoslavova 52, Senica, for the offence of forgery of documents under Section 296 of the Criminal Code, at the main hearing held on 19 December 2018, has decided as follows:

The defendant Dušan Lukáč is acquitted of the charge for the offence of forgery of documents under Section 296 of the Criminal Code, because it has not been proven that the act was committed by the defendant.)fx",
         R"fx()fx"},
    };
    return exemplars;
}

/// The shipped template with marker hints taken from `markers`.
inline PromptSpec default_prompt_spec(const MarkerSet& markers) {
    return {default_instruction_text(), markers, default_exemplars(), default_output_schema()};
}

inline PromptSpec default_prompt_spec() { return default_prompt_spec(default_marker_set()); }

}  // namespace factx

#endif  // FACTX_PROMPT_DEFAULTS_HPP
