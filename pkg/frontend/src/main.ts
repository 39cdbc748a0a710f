/**
 * App shell: initiation -> level picker -> reader loop -> finish, with the
 * query popover and the review-list panel alongside the story. All state
 * lives on the server; this file only sequences screens.
 */

import { Api } from './api.js';
import { GameClient } from './game.js';
import { el, clear } from './ui/dom.js';
import { HistoryPanel } from './ui/historyPanel.js';
import { InitiationScreen } from './ui/initiation.js';
import { LevelPicker } from './ui/levelPicker.js';
import { QueryPopover } from './ui/queryPopover.js';
import { Reader } from './ui/reader.js';

declare global {
  interface Window {
    STORYLOOM_API_BASE?: string;
  }
}

const API_BASE =
  window.STORYLOOM_API_BASE ??
  new URLSearchParams(window.location.search).get('api') ??
  'http://127.0.0.1:8000';

class App {
  private readonly client = new GameClient(new Api(API_BASE));
  private readonly main = document.getElementById('screen') as HTMLElement;
  private readonly side = document.getElementById('side') as HTMLElement;
  private readonly history = new HistoryPanel(this.side);
  private levelChosen = false;

  async boot(): Promise<void> {
    const genres = await this.client.listGenres();
    new InitiationScreen(this.main, genres, (genre, premise) => this.startGame(genre, premise)).render();
  }

  private async startGame(genre: string, premise: string): Promise<void> {
    await this.client.start(genre, premise || undefined);
    clear(this.main);
    this.main.append(el('p', { class: 'progress' }, 'Writing your opening scene six ways...'));
    const samples = await this.client.generateSamples();

    const picker = new LevelPicker(this.main, samples, (level) => this.pickLevel(level));
    picker.render();
    picker.showProgress(true);
    void this.client.waitOutline().then(() => {
      picker.showProgress(false);
      void this.maybeEnterStory();
    });
  }

  private async pickLevel(level: string): Promise<void> {
    await this.client.selectLevel(level);
    this.levelChosen = true;
    await this.maybeEnterStory();
  }

  private async maybeEnterStory(): Promise<void> {
    const session = this.client.session;
    if (!this.levelChosen || !session || session.status !== 'ready') {
      return; // either the level or the outline is still pending
    }
    const reader = new Reader(this.main, (index) => this.onChoose(reader, index));
    reader.mount();
    this.history.mount();
    this.history.show(await this.client.history());
    new QueryPopover(reader.textContainer, async (offsets) => {
      const segmentId = reader.textContainer.getAttribute('data-segment-id')!;
      const record = await this.client.explain(segmentId, offsets.text, [offsets.start, offsets.end]);
      this.history.show(await this.client.history());
      return record;
    });
    reader.showWaiting('The story begins...');
    reader.showSegment(await this.client.nextSegment());
  }

  private async onChoose(reader: Reader, index: number): Promise<void> {
    const session = await this.client.choose(index);
    if (session.cursor.awaiting === 'ending') {
      reader.showWaiting('Writing your ending...');
      reader.showSegment(await this.client.finishStory());
    } else {
      reader.showWaiting('What happens next...');
      reader.showSegment(await this.client.nextSegment());
    }
  }
}

new App().boot().catch((error) => {
  const screen = document.getElementById('screen');
  if (screen) {
    screen.textContent = `Could not reach the story service at ${API_BASE}: ${error}`;
  }
});
