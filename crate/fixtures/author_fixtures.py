#!/usr/bin/env python3
"""Writes the committed fixture corpora.

Article bodies are authored as explicit sentence lists, so the gold sentence
counts in study.gold.tsv come from the authoring itself rather than from the
segmenter under test. Re-run after editing: python3 fixtures/author_fixtures.py
"""

import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))

# (id, topic, outlet, orientation, title, excerpt or None, published_at, [sentences])
STUDY = [
    # --- debt ceiling -------------------------------------------------------
    ("dc-01", "debt_ceiling", "Riverside Ledger", "left",
     "Harlow Strikes Debt Deal After Weeks of Brinkmanship",
     "A last-minute agreement ends a standoff that rattled markets.",
     "2019-07-22T18:05:00Z", [
         "President Daniel Harlow announced a deal on the debt limit late Monday after weeks of tense talks.",
         "Critics said Harlow had created a reckless standoff that rattled markets.",
         "Speaker Maria Pellman said the agreement protects programs for working families.",
         "Harlow was blamed for the chaos by several economists, who warned that the brinkmanship could damage the U.S. credit rating.",
         "The Treasury had warned that it would run out of cash within days.",
         "Mr. Harlow defended the talks as necessary.",
     ]),
    ("dc-02", "debt_ceiling", "The Progressive Daily", "left",
     "Economists Warn Debt Standoff Left Lasting Damage",
     None,
     "2019-07-23T09:30:00Z", [
         "Economists on Tuesday condemned the way President Harlow handled the debt ceiling fight.",
         "Harlow's allies insisted the deal was a success, but the markets were not convinced.",
         "Speaker Maria Pellman accused the White House of holding the economy hostage.",
         "Harlow ignored the warnings, a careless move according to analysts.",
         "Consumer confidence fell for a second straight week.",
     ]),
    ("dc-03", "debt_ceiling", "Metro Courier", "left",
     "Debt Limit Deal Draws Mixed Reviews",
     "Lawmakers are divided over what the agreement achieves.",
     "2019-07-23T12:10:00Z", [
         "Democrats praised parts of the agreement while criticizing others.",
         "Some lawmakers credited President Harlow with a decisive final push.",
         "Others said Harlow failed to protect funding for schools and hospitals.",
         "Senator Richard Koenig, the majority leader, called the deal a reasonable compromise.",
         "Harlow is expected to sign the bill on Friday.",
     ]),
    ("dc-04", "debt_ceiling", "Northern Voice", "left",
     "A Manufactured Crisis, Courtesy of the White House",
     "The standoff was avoidable, critics argue.",
     "2019-07-24T07:45:00Z", [
         "The debt ceiling crisis was entirely avoidable, according to budget experts.",
         "They blamed Harlow for months of irresponsible threats.",
         "Even Republicans slammed Daniel Harlow after the Treasury warned of a default.",
         "Dr. Ines Marlow, an economist at a state university, said the episode was a fiasco.",
         "Harlow praised his own negotiators on Tuesday.",
     ]),
    ("dc-05", "debt_ceiling", "Capital Wire", "center",
     "Debt Ceiling Raised as Harlow, Congress Reach Agreement",
     "Lawmakers approved a two-year budget framework.",
     "2019-07-22T20:00:00Z", [
         "President Daniel Harlow and congressional leaders reached an agreement on Monday to raise the debt ceiling for two years.",
         "Business groups welcomed the deal and praised Harlow for ending the uncertainty.",
         "The agreement sets spending caps for defense and domestic programs.",
         "Speaker Maria Pellman said the House would vote on the measure next week.",
         "Treasury Secretary Alan Brandt thanked Harlow and lawmakers for their responsible approach.",
     ]),
    ("dc-06", "debt_ceiling", "Evening Standard Report", "center",
     "What the Debt Deal Means for Markets",
     None,
     "2019-07-23T15:20:00Z", [
         "Markets rose modestly after President Harlow announced the budget agreement.",
         "Analysts said the deal removes a major risk for the U.S. economy.",
         "Some investors credited Harlow with steady leadership during the talks.",
         "Others blamed Harlow for the weeks of uncertainty that preceded it.",
         "Treasury Secretary Alan Brandt said borrowing would resume immediately.",
     ]),
    ("dc-07", "debt_ceiling", "Midland Times", "center",
     "Budget Deal Clears Key Hurdle in the Senate",
     "The measure now heads to the president.",
     "2019-07-25T11:00:00Z", [
         "The Senate advanced the budget deal on Wednesday by a wide margin.",
         "Senator Richard Koenig said the vote showed that Congress can still work together.",
         "Harlow said he would sign the bill as soon as it reaches his desk.",
         "Speaker Maria Pellman called the outcome a victory for working families.",
         "Mr. Harlow also met with Koenig at the White House on Tuesday.",
     ]),
    ("dc-08", "debt_ceiling", "Liberty Herald", "right",
     "Harlow Delivers Spending Caps Conservatives Wanted",
     "The deal locks in limits on discretionary spending.",
     "2019-07-23T06:15:00Z", [
         "President Daniel Harlow delivered a major win for fiscal conservatives this week.",
         "The agreement, negotiated by Harlow and Treasury Secretary Alan Brandt, caps discretionary spending.",
         "Supporters hailed Harlow as a skillful negotiator.",
         "Speaker Maria Pellman was criticized by progressive activists for agreeing to the caps.",
     ]),
    ("dc-09", "debt_ceiling", "Frontier Post", "right",
     "A Win for Stability",
     "The president kept his promise to avoid default.",
     "2019-07-24T10:40:00Z", [
         "Daniel Harlow kept his promise to avoid a default.",
         "Conservative lawmakers applauded Harlow for his strong stance on spending.",
         "Democrats had predicted a disaster, but the deal proved them wrong.",
         "Harlow thanked Koenig for his support in the Senate.",
     ]),
    ("dc-10", "debt_ceiling", "National Sentinel", "right",
     "Debt Deal Shows Harlow Can Work With Congress",
     None,
     "2019-07-24T16:55:00Z", [
         "President Harlow showed decisive leadership in the final days of the negotiations.",
         "Some conservatives criticized Harlow for agreeing to higher domestic spending.",
         "Still, the White House praised Harlow's team for a successful outcome.",
         "Speaker Maria Pellman said she was not impressed.",
         "The Senate is expected to pass the bill this week.",
     ]),
    # --- gun control --------------------------------------------------------
    ("gc-01", "gun_control", "Riverside Ledger", "left",
     "Whitaker Signs Sweeping Background Check Law",
     "Advocates call the measure a turning point.",
     "2019-04-11T17:00:00Z", [
         "Governor Ellen Whitaker signed a sweeping background check law on Thursday.",
         "Gun safety advocates praised Whitaker for her courageous leadership.",
         "Mayor Karen Ortiz said the law would save lives in her city.",
         "Whitaker was applauded by parents who had lost children to gun violence.",
         "State Senator Thomas Reyes voted against the bill.",
     ]),
    ("gc-02", "gun_control", "The Progressive Daily", "left",
     "A Long-Awaited Step on Gun Safety",
     None,
     "2019-04-12T08:20:00Z", [
         "Ellen Whitaker delivered on a promise she made during her campaign.",
         "Advocates hailed the new law as a breakthrough.",
         "Opponents led by Wayne Dorsey attacked the measure as an overreach.",
         "Whitaker said she was proud to stand with survivors.",
     ]),
    ("gc-03", "gun_control", "Metro Courier", "left",
     "Advocates Say New Gun Law Does Not Go Far Enough",
     "The final bill dropped several proposals.",
     "2019-04-12T13:05:00Z", [
         "Some advocates said Governor Whitaker did not go far enough.",
         "They criticized Whitaker for dropping a proposed ban on assault weapons.",
         "Still, many credited Whitaker with a significant achievement.",
         "Mayor Karen Ortiz called for further action.",
     ]),
    ("gc-04", "gun_control", "Capital Wire", "center",
     "Governor Signs Background Check Bill",
     "Private sales now require a check.",
     "2019-04-11T18:30:00Z", [
         "Governor Ellen Whitaker signed a bill on Thursday that expands background checks to private sales.",
         "The measure passed the state legislature last month after a lengthy debate.",
         "Whitaker said the law strikes a balance between safety and rights.",
         "Wayne Dorsey, president of the state rifle association, said his group would challenge the law in court.",
     ]),
    ("gc-05", "gun_control", "Evening Standard Report", "center",
     "Rural Sheriffs Push Back on New Gun Law",
     "Sheriffs say they were not consulted.",
     "2019-04-13T09:10:00Z", [
         "Several rural sheriffs criticized Whitaker on Friday, saying the law ignored their concerns.",
         "Whitaker defended the measure in a radio interview.",
         "State Senator Thomas Reyes said the governor had abandoned rural voters.",
         "The sheriffs accused Whitaker of extreme overreach.",
     ]),
    ("gc-06", "gun_control", "Midland Times", "center",
     "Poll Finds Broad Support for Background Checks",
     "Most voters back the new law.",
     "2019-04-15T12:00:00Z", [
         "A new poll found that most voters support the background check law.",
         "Voters gave Governor Ellen Whitaker strong marks for her handling of the issue.",
         "Whitaker's approval rating rose to its highest level this year.",
         "Thomas Reyes questioned the poll's methodology.",
     ]),
    ("gc-07", "gun_control", "Capital Wire", "center",
     "Gun Rights Group Files Lawsuit",
     "The association says the law is unconstitutional.",
     "2019-04-15T16:45:00Z", [
         "The state rifle association filed a lawsuit on Monday challenging the new background check law.",
         "Wayne Dorsey, the group's president, said the law violates constitutional rights.",
         "Dorsey said members had donated more than a million dollars to the legal fight.",
         "Legal experts said the case could take years to resolve.",
     ]),
    ("gc-08", "gun_control", "Liberty Herald", "right",
     "Whitaker's Gun Grab Targets Law-Abiding Citizens",
     "Gun owners vow to fight the new rules.",
     "2019-04-12T07:00:00Z", [
         "Governor Ellen Whitaker has launched an extreme attack on the rights of law-abiding gun owners.",
         "Wayne Dorsey denounced the law as unconstitutional.",
         "Critics condemned Whitaker for ignoring thousands of rural residents.",
         "State Senator Thomas Reyes was praised by gun owners for his brave opposition.",
     ]),
    ("gc-09", "gun_control", "Frontier Post", "right",
     "Sheriffs Refuse to Enforce Governor's Gun Law",
     None,
     "2019-04-13T14:25:00Z", [
         "Several sheriffs said they would not enforce the law signed by Governor Whitaker.",
         "They blamed Whitaker for a dangerous and divisive policy.",
         "Whitaker mocked the sheriffs in a statement on Friday.",
         "Thomas Reyes said the governor had betrayed rural voters.",
     ]),
    ("gc-10", "gun_control", "National Sentinel", "right",
     "Gun Owners Rally Against Whitaker",
     "Thousands gathered at the capitol.",
     "2019-04-14T19:30:00Z", [
         "Thousands of gun owners rallied at the capitol on Saturday to protest Ellen Whitaker.",
         "Speakers slammed Whitaker as dishonest and reckless.",
         "Wayne Dorsey accused Whitaker of hypocrisy over her own armed security detail.",
         "A few attendees admitted that Whitaker had been honest about her plans.",
         "Critics said her policy was a failure that would damage public trust.",
     ]),
    # --- bushfires ----------------------------------------------------------
    ("bf-01", "bushfires", "Riverside Ledger", "left",
     "Mallory Under Fire for Holiday as Bushfires Rage",
     "The prime minister cut short a family trip.",
     "2020-01-04T08:00:00Z", [
         "Prime Minister Scott Mallory returned early from a family holiday on Saturday as bushfires burned across the country’s southeast.",
         "Firefighters and residents criticized Mallory for being absent during the worst days of the crisis.",
         "Commissioner Shane Fitzgerald praised the volunteers who have worked for weeks without rest.",
         "Mallory said he deeply regretted any offense caused by his trip.",
         "Dr. Anna Lindqvist, a climate scientist, said the fires were a warning that could not be ignored.",
     ]),
    ("bf-02", "bushfires", "Northern Voice", "left",
     "Climate Inaction Has a Cost",
     "Scientists say the fire season is getting longer.",
     "2020-01-05T10:15:00Z", [
         "Scientists have warned for decades that hotter summers would bring longer fire seasons.",
         "Anna Lindqvist said the government ignored those warnings.",
         "Protesters accused Mallory of shameful inaction on climate policy.",
         "Mallory dismissed the link between the fires and emissions policy as a distraction.",
         "Activists condemned Mallory outside his official residence in the capital.",
     ]),
    ("bf-03", "bushfires", "The Progressive Daily", "left",
     "Relief Payments Announced for Fire Victims",
     None,
     "2020-01-06T11:30:00Z", [
         "Scott Mallory announced emergency relief payments for families who lost homes.",
         "Aid groups welcomed the payments and thanked Mallory for moving quickly.",
         "But volunteer firefighters said Mallory ignored their requests for better equipment.",
         "Commissioner Shane Fitzgerald said the payments would help rebuild communities.",
     ]),
    ("bf-04", "bushfires", "Metro Courier", "left",
     "Evacuations Ordered as Winds Shift",
     "Coastal towns emptied ahead of dangerous conditions.",
     "2020-01-07T06:50:00Z", [
         "Thousands of residents were ordered to leave coastal towns on Tuesday as winds shifted.",
         "Commissioner Shane Fitzgerald urged people to follow the advice of emergency crews.",
         "Prime Minister Scott Mallory visited an evacuation center in the afternoon.",
         "Mallory met families and volunteers at the center.",
     ]),
    ("bf-05", "bushfires", "Capital Wire", "center",
     "Government Commits Troops to Fire Response",
     "Army reservists will support fire crews.",
     "2020-01-04T15:00:00Z", [
         "Mallory announced that army reservists would assist fire crews in three states.",
         "Commissioner Shane Fitzgerald welcomed the extra help.",
         "Some officials praised Mallory for the decision, while others said it came too late.",
         "Opposition leaders criticized Mallory for weeks of delay.",
     ]),
    ("bf-06", "bushfires", "Evening Standard Report", "center",
     "Leaders Pledge Recovery Fund",
     None,
     "2020-01-08T09:00:00Z", [
         "Prime Minister Scott Mallory and Premier Gladys Benn pledged a joint recovery fund on Thursday.",
         "Local councils welcomed the fund and commended Mallory for listening to affected communities.",
         "Gladys Benn said rebuilding would take years.",
         "Business leaders credited Mallory with a calm and effective response.",
     ]),
    ("bf-07", "bushfires", "Midland Times", "center",
     "Smoke Haze Blankets Major Cities",
     "Air quality reached hazardous levels.",
     "2020-01-09T13:40:00Z", [
         "Smoke from the fires blanketed major cities for a third straight week.",
         "Health officials advised residents to stay indoors.",
         "Anna Lindqvist said the haze was among the worst ever recorded.",
         "Scott Mallory said the government would fund new air quality monitors.",
     ]),
    ("bf-08", "bushfires", "Liberty Herald", "right",
     "ScoMo Stands Firm as Critics Politicize Fires",
     "The prime minister has kept his focus on recovery.",
     "2020-01-06T07:20:00Z", [
         "ScoMo has shown steady leadership during a difficult summer.",
         "Activists have tried to politicize the fires, but Mallory has stayed focused on recovery.",
         "Commissioner Shane Fitzgerald thanked the government for its support.",
         "Supporters praised Mallory as a trusted and responsible leader.",
     ]),
    ("bf-09", "bushfires", "Frontier Post", "right",
     "Volunteers Are the Real Heroes of This Summer",
     "Volunteer crews have carried the load.",
     "2020-01-07T18:10:00Z", [
         "Volunteer firefighters have worked tirelessly to protect homes and wildlife.",
         "Commissioner Shane Fitzgerald praised their courage in a briefing on Monday.",
         "Gladys Benn said the state would honor the volunteers with a special award.",
         "Australia’s volunteer tradition remains strong.",
     ]),
    ("bf-10", "bushfires", "National Sentinel", "right",
     "Mallory Backs Hazard Reduction Burning",
     "Fuel loads must come down, the prime minister says.",
     "2020-01-10T08:35:00Z", [
         "Prime Minister Scott Mallory called for more hazard reduction burning to reduce fuel loads.",
         "Rural landholders hailed Mallory for listening to people on the ground.",
         "Anna Lindqvist said hazard reduction alone would not solve the problem.",
         "Mallory said the government would review land management rules.",
     ]),
]

STUDY_GAZETTEER = [
    ("Harlow", "Daniel Harlow"),
    ("Koenig", "Richard Koenig"),
    ("Whitaker", "Ellen Whitaker"),
    ("Dorsey", "Wayne Dorsey"),
    ("Mallory", "Scott Mallory"),
    ("ScoMo", "Scott Mallory"),
]

# Annotated mini corpus: gold sentence labels toward the MFA (Joan Carter).
MINI = [
    ("m-1", "budget_vote", "Harbor Gazette", "left",
     "Budget Vote Ends Long Standoff", "The chamber approved the budget.",
     "2021-03-01T09:00:00Z", [
         ("Senator Joan Carter praised the budget vote on Monday.", "positive"),
         ("Critics blamed Carter for the delay, and Carter did not respond.", "negative"),
         ("Joan Carter spoke to reporters in the afternoon.", "neutral"),
         ("The vote passed easily.", None),
         ("Analysts said Carter was not effective in the talks.", "negative"),
     ]),
    ("m-2", "budget_vote", "Plains Observer", "center",
     "Carter Credited With Deal", None,
     "2021-03-01T12:00:00Z", [
         ("Joan Carter was hailed as a skillful negotiator.", "positive"),
         ("Carter met Paul Grant on Tuesday.", "neutral"),
     ]),
    ("m-3", "budget_vote", "Summit Review", "right",
     "Opposition Unhappy With Budget", "Spending remains a sticking point.",
     "2021-03-02T08:00:00Z", [
         ("Paul Grant criticized the budget.", None),
     ]),
]

MINI_GAZETTEER = [("Carter", "Joan Carter")]


def record(aid, topic, outlet, orientation, title, excerpt, published_at, sentences):
    return {
        "id": aid,
        "topic_id": topic,
        "outlet": outlet,
        "orientation": orientation,
        "title": title,
        "excerpt": excerpt,
        "body": " ".join(sentences),
        "published_at": published_at,
        "url": None,
    }


def write_jsonl(name, records):
    with open(os.path.join(HERE, name), "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


def write_tsv(name, rows):
    with open(os.path.join(HERE, name), "w", encoding="utf-8") as f:
        for row in rows:
            f.write("\t".join(str(c) for c in row) + "\n")


def main():
    study = [record(*a) for a in STUDY]
    write_jsonl("study.jsonl", study)
    write_jsonl("debt_ceiling.jsonl", [r for r in study if r["topic_id"] == "debt_ceiling"])
    write_tsv("study.gold.tsv", [(a[0], len(a[7])) for a in STUDY])
    write_tsv("study.gazetteer.tsv", STUDY_GAZETTEER)

    mini = [record(*a[:7], [s for s, _ in a[7]]) for a in MINI]
    write_jsonl("mini.jsonl", mini)
    write_tsv("mini.gazetteer.tsv", MINI_GAZETTEER)
    labels = []
    for a in MINI:
        for i, (_, label) in enumerate(a[7]):
            if label is not None:
                labels.append((a[0], i, label))
    write_tsv("mini.labels.tsv", labels)


if __name__ == "__main__":
    main()
