#pragma once

// Built-in copies of data/stopwords.txt and data/stemmer_rules.txt.
// Keep in sync; the test suite compares them byte for byte.

#include <string_view>

namespace painsift::resources {

inline constexpr std::string_view kStopwords = R"PSW(# English stopwords, one per line. Lines starting with '#' are ignored.
# "pain" must never appear here.
a
about
above
after
again
against
all
am
an
and
any
are
as
at
be
because
been
before
being
below
between
both
but
by
can
could
did
do
does
doing
down
during
each
few
for
from
further
had
has
have
having
he
her
here
hers
herself
him
himself
his
how
i
if
in
into
is
it
its
itself
just
me
might
more
most
must
my
myself
no
nor
not
now
of
off
on
once
only
or
other
our
ours
ourselves
out
over
own
per
same
shall
she
should
so
some
such
than
that
the
their
theirs
them
themselves
then
there
these
they
this
those
through
to
too
under
until
up
upon
very
via
was
we
were
what
when
where
which
while
who
whom
why
will
with
within
without
would
yet
you
your
yours
yourself
yourselves
also
although
among
amongst
around
became
become
becomes
cannot
else
ever
every
however
may
much
neither
never
nevertheless
often
onto
rather
since
still
therefore
though
thus
toward
towards
whether
)PSW";

inline constexpr std::string_view kStemmerRules = R"PSR(# Suffix-stripping rules, Porter-style.
#
# Columns: step  suffix  replacement  condition  [post]
#   replacement "-" means the empty string.
#
# Within a step the longest suffix that matches the word is selected. If its
# condition holds for the stem (word minus suffix), the suffix is replaced and
# the step ends; otherwise the step does nothing. Steps run in ascending order
# and the whole pass repeats until the word stops changing, which makes the
# stemmer idempotent. Words of two letters or fewer are left alone.
#
# Conditions on the stem:
#   *      always
#   v      contains a vowel
#   m>0    measure greater than 0   (measure = number of VC sequences)
#   m>1    measure greater than 1
#   m>1,st measure greater than 1 and ends in 's' or 't'
#   m>1,l  measure greater than 1 and ends in 'l'
#   e      measure greater than 1, or measure 1 and not consonant-vowel-consonant
#          (final consonant not w, x or y)
#
# Post action "fix" (after -ed/-ing removal): append 'e' after at/bl/iz; else
# drop one letter of a doubled final consonant other than l, s, z; else append
# 'e' when the measure is 1 and the stem ends consonant-vowel-consonant.
#
# Deviation from Porter: step 1 keeps words ending in -as, -is, -us intact so
# that "increased" and "increase" share the stem "increas".

1 sses    ss    *
1 ies     i     *
1 ss      ss    *
1 as      as    *
1 is      is    *
1 us      us    *
1 s       -     *

2 eed     ee    m>0
2 ed      -     v     fix
2 ing     -     v     fix

3 y       i     v

4 ational ate   m>0
4 tional  tion  m>0
4 enci    ence  m>0
4 anci    ance  m>0
4 izer    ize   m>0
4 abli    able  m>0
4 alli    al    m>0
4 entli   ent   m>0
4 eli     e     m>0
4 ousli   ous   m>0
4 ization ize   m>0
4 ation   ate   m>0
4 ator    ate   m>0
4 alism   al    m>0
4 iveness ive   m>0
4 fulness ful   m>0
4 ousness ous   m>0
4 aliti   al    m>0
4 iviti   ive   m>0
4 biliti  ble   m>0

5 icate   ic    m>0
5 ative   -     m>0
5 alize   al    m>0
5 iciti   ic    m>0
5 ical    ic    m>0
5 ful     -     m>0
5 ness    -     m>0

6 al      -     m>1
6 ance    -     m>1
6 ence    -     m>1
6 er      -     m>1
6 ic      -     m>1
6 able    -     m>1
6 ible    -     m>1
6 ant     -     m>1
6 ement   -     m>1
6 ment    -     m>1
6 ent     -     m>1
6 ion     -     m>1,st
6 ou      -     m>1
6 ism     -     m>1
6 ate     -     m>1
6 iti     -     m>1
6 ous     -     m>1
6 ive     -     m>1
6 ize     -     m>1

7 e       -     e

8 l       -     m>1,l
)PSR";

}  // namespace painsift::resources
