"""Generate the bundled demo corpus (src/chatprofiler/data/demo/).

A scripted COVID-19 interview chatbot with five questions, followed by
satisfaction, trust and rationale questions. Sessions vary in answer quality,
drop off at different points, and the location question is sometimes re-asked.
"""
from __future__ import annotations

import argparse
import json
import random
from pathlib import Path

from chatprofiler.transcript import InterviewConfig, Message, Role, Session, serialize_corpus

OUT = Path(__file__).resolve().parents[1] / "src" / "chatprofiler" / "data" / "demo"

QUESTIONS = [
    "How are you feeling today?",
    "Where are you located?",
    "What do you do outside work?",
    "What are the challenges you currently face?",
    "What do you think you can do to help w/ this pandemic?",
    "How satisfied are you with the interview experience? Please rate it on a scale of 1 to 5",
    "How much do you trust this chatbot? Please rate it on a scale of 1 to 5",
    "Could you tell me why you gave those ratings?",
]

FEELINGS = [
    ("Pretty good, thanks for asking.", "Glad to hear that! Thank you for sharing."),
    ("A bit anxious about everything going on.", "I'm sorry to hear that. It is understandable to feel worried right now."),
    ("Tired. Work has been exhausting lately.", "I'm sorry you feel tired. Thank you for being honest with me."),
    ("I feel lonely since I can't see my friends.", "That sounds hard, and I appreciate you sharing how you feel."),
    ("fine", "Thanks for letting me know."),
    ("Honestly stressed but hopeful that things will improve soon.", "I understand. Hope is important, thank you for sharing."),
    ("good", "Great, glad to hear it!"),
]

LOCATIONS = [
    "Boulder, Colorado",
    "I live in Toronto",
    "Austin, Texas",
    "a small town near Portland, Oregon",
    "Chicago",
    "Vancouver, BC",
    "New Jersey, close to the city",
]
DEFLECT_PLAYFUL = [("You tell me first.", "What about you?"), ("Why do you want to know?", "You go first."),
                   ("Guess!", "What about you?")]
DEFLECT_REFUSE = [("no", "I don't want to"), ("nope", "I would rather not say")]

HOBBIES = [
    "I like hiking and photography when the weather is nice.",
    "Mostly video games and cooking new recipes with my partner.",
    "Reading sci-fi novels and running in the park.",
    "nothing much",
    "I play guitar in a small band and volunteer at the food bank on weekends.",
    "sleep",
    "Gardening, I have been growing tomatoes and herbs on my balcony.",
]
HOBBY_ACKS = ["That sounds fun!", "Nice, thanks for sharing.", "Interesting!"]

CHALLENGES = [
    "Working from home with two kids is really hard, I barely get any focused time and my internet keeps dropping.",
    "Finding a job. I was laid off in March and the market is brutal.",
    "Staying motivated and keeping a routine without the office.",
    "not much",
    "Paying rent on time and worrying about my parents who are high risk.",
    "My mental health has been up and down, isolation is tough.",
    "idk",
]
HELP = [
    "Wear a mask, keep distance and support local businesses.",
    "Stay home as much as possible and check on elderly neighbors.",
    "donate",
    "Follow the guidelines and encourage my friends to get tested.",
    "I sew masks for a local hospital.",
    "not sure",
]
RATIONALES = [
    "The chatbot was friendly and easy to talk to.",
    "It felt a bit repetitive and robotic.",
    "I liked the questions but it did not understand some of my answers.",
    "Great experience, very smooth!",
    "It was okay.",
    "Annoying when it asked the same thing twice.",
    "I love how polite it was.",
    "Not good at all, felt like a survey.",
]
PROBES = ["Could you tell me a bit more?", "Can you elaborate on that?"]
ENDING = "Thank you for your time! This concludes our chat."


def make_session(rng: random.Random, idx: int, explicit_ids: bool) -> Session:
    t = 1_600_000_000.0 + idx * 3600.0
    msgs: list[Message] = []

    def say(role, text, qid):
        nonlocal t
        t += rng.uniform(4, 40) if role == "user" else rng.uniform(1, 4)
        msgs.append(Message(Role(role), text, round(t, 1), qid if explicit_ids else None))

    # where the participant leaves: None = finishes everything
    drop = rng.choices([None, 1, 2, 3, 4, 5], weights=[70, 3, 10, 5, 7, 5])[0]

    answer, ack = rng.choice(FEELINGS)
    say("bot", "Hi! I'm Ava and I'd like to chat about life during COVID-19. " + QUESTIONS[0], 1)
    if drop == 1:
        return Session(f"s{idx:03d}", tuple(msgs))
    say("user", answer, 1)
    say("bot", ack, 1)

    say("bot", rng.choice([QUESTIONS[1], "Where you are located?"]), 2)
    if drop == 2 and rng.random() < 0.5:
        return Session(f"s{idx:03d}", tuple(msgs))
    r = rng.random()
    if r < 0.3:
        first, second = rng.choice(DEFLECT_PLAYFUL)
        say("user", first, 2)
        say("bot", QUESTIONS[1], 2)
        say("user", second, 2)
    elif r < 0.42:
        first, second = rng.choice(DEFLECT_REFUSE)
        say("user", first, 2)
        say("bot", QUESTIONS[1], 2)
        say("user", second, 2)
    else:
        loc = rng.choice(LOCATIONS)
        if rng.random() < 0.12:
            loc += rng.choice([", you can reach me at 303-555-0142", ", email me at sam.lee@example.com"])
        say("user", loc, 2)
    if drop == 2:
        return Session(f"s{idx:03d}", tuple(msgs))

    say("bot", "Thanks! " + QUESTIONS[2], 3)
    if drop == 3:
        return Session(f"s{idx:03d}", tuple(msgs))
    hobby = rng.choice(HOBBIES)
    say("user", hobby, 3)
    if idx == 17:
        say("bot", "Haha, shut up, that is amazing!", 3)
    else:
        say("bot", rng.choice(HOBBY_ACKS), 3)

    say("bot", QUESTIONS[3], 4)
    if drop == 4:
        return Session(f"s{idx:03d}", tuple(msgs))
    ch = rng.choice(CHALLENGES)
    say("user", ch, 4)
    if len(ch.split()) < 4:
        say("bot", rng.choice(PROBES), 4)
        say("user", rng.choice(["just the usual stuff", "money I guess", "being stuck at home"]), 4)
    say("bot", "I hear you, that sounds really challenging. Thank you for sharing.", 4)

    say("bot", QUESTIONS[4], 5)
    if drop == 5:
        return Session(f"s{idx:03d}", tuple(msgs))
    say("user", rng.choice(HELP), 5)

    ratings = rng.random() < 0.15
    sat = rng.choice([2, 3, 4, 4, 5, 5])
    trust = max(1, min(5, sat + rng.choice([-1, 0, 0, 1])))
    rationale = rng.choice(RATIONALES)
    if ratings:
        say("bot", ENDING, None)
        return Session(f"s{idx:03d}", tuple(msgs), satisfaction_rating=sat, trust_rating=trust,
                       feedback_texts=(rationale,))
    say("bot", QUESTIONS[5], 6)
    say("user", rng.choice([str(sat), f"I'd say {sat}", f"{sat} out of 5"]), 6)
    say("bot", QUESTIONS[6], 7)
    say("user", rng.choice([str(trust), f"{trust}!", f"maybe a {trust}"]), 7)
    say("bot", QUESTIONS[7], 8)
    say("user", rationale, 8)
    say("bot", ENDING, None)
    return Session(f"s{idx:03d}", tuple(msgs))


def build(n: int, seed: int) -> tuple[list[Session], InterviewConfig]:
    rng = random.Random(seed)
    sessions = [make_session(rng, i, explicit_ids=(i % 5 == 4)) for i in range(n)]
    cfg = InterviewConfig.from_dict(
        {
            "questions": QUESTIONS,
            "rating_question_ids": {"satisfaction": 6, "trust": 7, "feedback": [8]},
            "end_marker_texts": [ENDING],
            "max_evidence_per_suggestion": 2,
            "rng_seed": 0,
        }
    )
    return sessions, cfg


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-n", type=int, default=60, help="number of sessions")
    ap.add_argument("--seed", type=int, default=2020)
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()
    sessions, cfg = build(args.n, args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "transcripts.jsonl").write_text(serialize_corpus(sessions), encoding="utf-8")
    (args.out / "interview.json").write_text(json.dumps(cfg.to_dict(), indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(sessions)} sessions to {args.out}")


if __name__ == "__main__":
    main()
