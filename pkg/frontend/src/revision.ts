/**
 * Guards async responses against staleness: each accepted result must
 * carry a revision at least as new as the newest one seen so far, and
 * each issued request must be the most recent one.
 */
export class RevisionGate {
  private latestRevision = 0;
  private latestTicket = 0;

  /** Tag an outgoing request; pass the ticket back to `accept`. */
  issue(): number {
    return ++this.latestTicket;
  }

  /**
   * Returns true when the response should be applied. Out-of-order
   * responses (an older ticket, or a revision older than one already
   * displayed) are discarded.
   */
  accept(ticket: number, revision: number): boolean {
    if (ticket !== this.latestTicket) return false;
    if (revision < this.latestRevision) return false;
    this.latestRevision = revision;
    return true;
  }

  get revision(): number {
    return this.latestRevision;
  }
}
